//! Assembly of the L-packet: one member per embedding of the torus.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::algebra::{classical_group_order, ClassicalKind};
use crate::building::{fixed_vertex, reduction_type, ReductionType, VertexLattice};
use crate::error::{domain, Error, Result};
use crate::hermitian::{
    all_embedding_choices, classify_space, inner_form_bit, is_quasi_split_embedding, total_disc, EmbeddingChoice,
    FieldParams, SpaceLabel,
};
use crate::lparam::{
    character_data, compute_A_phi, decomposition, is_general_position, validate, CharacterData, TameParameter,
};
use crate::tori::{neron_component_order, tbar_orders, ElementalDecomposition};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InnerForm {
    QuasiSplit,
    NonQuasiSplit,
    /// Odd `n`: both pure inner forms are quasi-split; the bit is the
    /// discriminant class distinguishing the two Hermitian spaces.
    Pure(bool),
}

/// One of the two irreducible constituents of the induction from the
/// identity component in odd dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Constituent {
    /// Value on the nontrivial coset of the center, `±1`.
    pub sign_on_z: i8,
    pub selected: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PacketMember {
    pub choice: EmbeddingChoice,
    pub inner_form: InnerForm,
    pub space: SpaceLabel,
    pub vertex: VertexLattice,
    pub reduction: ReductionType,
    pub tbar: Vec<BigInt>,
    pub dl_degree: BigInt,
    pub central_bit: Option<bool>,
    pub constituents: Vec<Constituent>,
    /// Element of `⊕ Z/d_i` indexing the member's character of `A_φ`.
    pub label: Option<Vec<BigInt>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PacketDescriptor {
    pub parameter: TameParameter,
    pub q: u64,
    pub decomposition: ElementalDecomposition,
    pub j: usize,
    pub character: CharacterData,
    pub general_position: bool,
    pub a_phi: Vec<BigInt>,
    pub neron_components: u32,
    pub members: Vec<PacketMember>,
    pub label_warning: Option<String>,
}

impl PacketDescriptor {
    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn a_phi_order(&self) -> BigInt {
        self.a_phi.iter().product()
    }
}

/// `|Ḡ°(k)|_{p'} / |T̄(k)|`, with `Ḡ° = Sp_l × SO_{m_red}`.
pub fn dl_degree(reduction: &ReductionType, tbar: &[BigInt], q: u64) -> Result<BigInt> {
    let sp = classical_group_order(ClassicalKind::Symplectic, reduction.l, q, true)?;
    let so = classical_group_order(ClassicalKind::SpecialOrthogonal, reduction.m_red, q, reduction.orth_split)?;
    let num = sp.p_prime_part * so.p_prime_part;
    let den: BigInt = tbar.iter().product();
    if den.is_zero() {
        return Err(Error::Consistency("torus of order zero".into()));
    }
    let (quot, rem) = num.div_rem(&den);
    if !rem.is_zero() {
        return Err(Error::Consistency(format!("torus order {den} does not divide |{reduction}|_p' = {num}")));
    }
    Ok(quot)
}

/// Records the central bit and the two constituents in odd dimension; a
/// no-op in even dimension, where the induction stays irreducible.
pub fn select_constituent(mut member: PacketMember, cd: &CharacterData, n: usize) -> PacketMember {
    if n.is_multiple_of(2) {
        member.central_bit = None;
        member.constituents.clear();
        return member;
    }
    let bit = cd.u1_bit.unwrap_or(false);
    member.central_bit = Some(bit);
    member.constituents =
        [1i8, -1].into_iter().map(|sign| Constituent { sign_on_z: sign, selected: (sign < 0) == bit }).collect();
    member
}

/// Mixed-radix digits of `index` in the group `⊕ Z/d_i`, last factor
/// least significant.
fn mixed_radix(index: usize, divisors: &[BigInt]) -> Vec<BigInt> {
    let mut rest = BigInt::from(index);
    let mut digits = vec![BigInt::zero(); divisors.len()];
    for (k, d) in divisors.iter().enumerate().rev() {
        let (q, r) = rest.div_rem(d);
        digits[k] = r;
        rest = q;
    }
    digits
}

/// Labels members by characters of `A_φ`.
///
/// Members are ordered by their bit vectors; the member at position `t`
/// gets the element of `⊕ Z/d_i` with mixed-radix digits of `t`, so the
/// base-point embedding gets the trivial character and for `d_i = 2`
/// labels are the bit vectors themselves. If `|A_φ|` differs from the
/// number of members, labels are omitted and a warning is set.
pub fn label_members(mut desc: PacketDescriptor, divisors: &[BigInt]) -> PacketDescriptor {
    let order: BigInt = divisors.iter().product();
    if order != BigInt::from(desc.members.len()) {
        desc.label_warning =
            Some(format!("|A_phi| = {order} but the packet has {} members; labels omitted", desc.members.len()));
        for m in &mut desc.members {
            m.label = None;
        }
        return desc;
    }
    desc.label_warning = None;
    for (t, m) in desc.members.iter_mut().enumerate() {
        m.label = Some(mixed_radix(t, divisors));
    }
    desc
}

fn build_member(dec: &ElementalDecomposition, choice: EmbeddingChoice, fp: &FieldParams) -> Result<PacketMember> {
    let n = dec.n;
    let qs = is_quasi_split_embedding(&choice, n);
    let space = classify_space(n, total_disc(dec, &choice, fp)?, fp)?;
    if space.is_quasi_split() != qs {
        return Err(Error::Consistency("discriminant and valuation parity disagree".into()));
    }
    let inner_form = match (n % 2, qs) {
        (1, _) => InnerForm::Pure(inner_form_bit(&choice)),
        (_, true) => InnerForm::QuasiSplit,
        (_, false) => InnerForm::NonQuasiSplit,
    };
    let vertex = fixed_vertex(dec, &choice)?;
    let reduction = reduction_type(dec, &choice, n)?;
    let tbar = tbar_orders(dec, fp.q());
    let dl_degree = dl_degree(&reduction, &tbar, fp.q())?;
    Ok(PacketMember {
        choice,
        inner_form,
        space,
        vertex,
        reduction,
        tbar,
        dl_degree,
        central_bit: None,
        constituents: Vec::new(),
        label: None,
    })
}

/// Builds the whole packet for a discrete regular parameter.
pub fn enumerate_members(p: &TameParameter, q: u64) -> Result<PacketDescriptor> {
    let fp = FieldParams::new(q)?;
    let report = validate(p);
    if !report.all_ok() {
        return domain(format!("invalid parameter: {}", report.diagnostics.join("; ")));
    }
    let dec = decomposition(p)?;
    let character = character_data(p, q)?;
    let general_position = is_general_position(&character, &dec, q)?;
    let a_phi = compute_A_phi(p)?;
    let members = all_embedding_choices(&dec)
        .into_iter()
        .map(|choice| build_member(&dec, choice, &fp).map(|m| select_constituent(m, &character, p.n())))
        .collect::<Result<Vec<_>>>()?;
    let desc = PacketDescriptor {
        parameter: p.clone(),
        q,
        j: dec.j(),
        decomposition: dec,
        character,
        general_position,
        a_phi: a_phi.clone(),
        neron_components: neron_component_order(p.n()),
        members,
        label_warning: None,
    };
    Ok(label_members(desc, &a_phi))
}

/// The packet size predicted by the count of embeddings.
pub fn expected_size(dec: &ElementalDecomposition) -> BigInt {
    BigInt::one() << dec.j()
}
