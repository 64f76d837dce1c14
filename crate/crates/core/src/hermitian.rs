//! Hermitian spaces over a ramified quadratic extension `E/K`, tracked by
//! discriminant classes in `K^× / Nm E^×`.
//!
//! The residue field has odd order `q`. The norm group has index two and
//! `K^× / Nm E^×` is generated by a non-square unit `u`, so every class is a
//! single bit: the exponent of `u`.

use std::fmt;

use crate::algebra::prime_power;
use crate::error::{input, Result};
use crate::tori::ElementalDecomposition;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldParams {
    q: u64,
}

impl FieldParams {
    pub fn new(q: u64) -> Result<Self> {
        match prime_power(q) {
            Some((p, _)) if p != 2 => Ok(FieldParams { q }),
            Some(_) => input(format!("q = {q} must be odd")),
            None => input(format!("q = {q} is not a prime power")),
        }
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn q_mod_4(&self) -> u64 {
        self.q % 4
    }

    /// `-1` is a norm iff it is a square in `k`, i.e. iff `q ≡ 1 (mod 4)`.
    pub fn class_of_minus_one(&self) -> DiscClass {
        DiscClass::from_bit(((self.q - 1) / 2) % 2 == 1)
    }
}

/// A class in `K^× / Nm E^×`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiscClass(bool);

impl DiscClass {
    pub const TRIVIAL: DiscClass = DiscClass(false);
    pub const NONTRIVIAL: DiscClass = DiscClass(true);

    pub fn from_bit(bit: bool) -> Self {
        DiscClass(bit)
    }

    pub fn bit(self) -> bool {
        self.0
    }

    pub fn pow(self, e: usize) -> Self {
        DiscClass(self.0 && e % 2 == 1)
    }
}

impl std::ops::Mul for DiscClass {
    type Output = DiscClass;
    fn mul(self, rhs: DiscClass) -> DiscClass {
        disc_mul(self, rhs)
    }
}

/// Discriminants multiply under orthogonal sum.
pub fn disc_mul(a: DiscClass, b: DiscClass) -> DiscClass {
    DiscClass(a.0 ^ b.0)
}

/// Isometry class of a Hermitian space of dimension `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SpaceLabel {
    /// `Hyp^m`, even dimension, quasi-split unitary group.
    Hyperbolic { m: usize },
    /// `Hyp^{m-1} ⊕ Ani`, even dimension, non-quasi-split unitary group.
    HyperbolicPlusAnisotropic { m: usize },
    /// `Hyp^m ⊕ L`, odd dimension; `line` is the discriminant of `L`.
    HyperbolicPlusLine { m: usize, line: DiscClass },
}

impl SpaceLabel {
    /// Whether the unitary group of the space is quasi-split.
    pub fn is_quasi_split(&self) -> bool {
        !matches!(self, SpaceLabel::HyperbolicPlusAnisotropic { .. })
    }
}

impl fmt::Display for SpaceLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            SpaceLabel::Hyperbolic { m } => write!(f, "Hyp^{m}"),
            SpaceLabel::HyperbolicPlusAnisotropic { m } => write!(f, "Hyp^{} + Ani", m - 1),
            SpaceLabel::HyperbolicPlusLine { m, line } => write!(f, "Hyp^{m} + L(u^{})", line.bit() as u8),
        }
    }
}

/// Classifies the Hermitian space of dimension `n` and discriminant `d`.
///
/// `dHyp = -1`, so `Hyp^m` has discriminant `(-1)^m`.
pub fn classify_space(n: usize, d: DiscClass, fp: &FieldParams) -> Result<SpaceLabel> {
    if n == 0 {
        return input("a Hermitian space needs dimension at least 1");
    }
    let m = n / 2;
    let hyp = fp.class_of_minus_one().pow(m);
    Ok(if n % 2 == 1 {
        SpaceLabel::HyperbolicPlusLine { m, line: d * hyp }
    } else if d == hyp {
        SpaceLabel::Hyperbolic { m }
    } else {
        SpaceLabel::HyperbolicPlusAnisotropic { m }
    })
}

/// `disc(V_{2r,κ}) = u^{v_L(κ) + r(q-1)/2}`; only the parity of `v_L(κ)`
/// matters.
pub fn disc_v_s_kappa(r: usize, v_parity: bool, fp: &FieldParams) -> DiscClass {
    DiscClass(v_parity) * fp.class_of_minus_one().pow(r)
}

/// The class of `κ = (κ_1, …, κ_j)` that an embedding depends on.
///
/// One valuation-parity bit per `s = 2r` factor; for odd `n` the unit
/// class of `κ_j` for the `U_1` factor, whose valuation is forced.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EmbeddingChoice {
    pub parity: Vec<bool>,
    pub u1_class: Option<bool>,
}

impl EmbeddingChoice {
    /// Checks that the shape agrees with the decomposition.
    pub fn check(&self, dec: &ElementalDecomposition) -> Result<()> {
        if self.parity.len() != dec.even_count() {
            return input(format!(
                "embedding has {} parity bits, decomposition has {} factors of even dimension",
                self.parity.len(),
                dec.even_count()
            ));
        }
        if self.u1_class.is_some() != dec.has_u1 {
            return input("unit class must be present exactly when n is odd");
        }
        Ok(())
    }

    pub fn parity_sum(&self) -> usize {
        self.parity.iter().filter(|&&b| b).count()
    }

    /// The choice with all parities even and trivial unit class.
    pub fn base_point(dec: &ElementalDecomposition) -> Self {
        EmbeddingChoice { parity: vec![false; dec.even_count()], u1_class: dec.has_u1.then_some(false) }
    }

    /// All bits, the unit class last.
    pub fn bits(&self) -> Vec<bool> {
        self.parity.iter().copied().chain(self.u1_class).collect()
    }
}

/// All `2^j` choices, sorted by bit vector (parities first, unit class
/// last).
pub fn all_embedding_choices(dec: &ElementalDecomposition) -> Vec<EmbeddingChoice> {
    let k = dec.even_count();
    let j = dec.j();
    let mut out: Vec<EmbeddingChoice> = (0u64..1 << j)
        .map(|mask| {
            // most significant bit first so that the natural order is lexicographic
            let bit = |t: usize| mask >> (j - 1 - t) & 1 == 1;
            EmbeddingChoice { parity: (0..k).map(bit).collect(), u1_class: dec.has_u1.then(|| bit(k)) }
        })
        .collect();
    out.sort();
    out
}

/// Odd `n` is always quasi-split; for even `n` the sum of the valuations
/// of the `κ_i` must be even.
pub fn is_quasi_split_embedding(choice: &EmbeddingChoice, n: usize) -> bool {
    n % 2 == 1 || choice.parity_sum().is_multiple_of(2)
}

/// Discriminant of `V_{s,κ} = ⊕ V_{s_i,κ_i}`.
///
/// The `U_1` line `⟨κ_j⟩` has discriminant `u^{u1_class}`.
pub fn total_disc(dec: &ElementalDecomposition, choice: &EmbeddingChoice, fp: &FieldParams) -> Result<DiscClass> {
    choice.check(dec)?;
    let planes = dec
        .even_factors()
        .zip(&choice.parity)
        .map(|(f, &v)| disc_v_s_kappa(f.r, v, fp))
        .fold(DiscClass::TRIVIAL, disc_mul);
    Ok(planes * DiscClass(choice.u1_class.unwrap_or(false)))
}

/// Which of the two pure inner forms the embedding lands in: `false` for
/// the form containing the base-point embedding.
///
/// For even `n` this is the non-quasi-split form; for odd `n` both forms
/// are isomorphic as groups and the bit is the discriminant of the
/// leftover line.
pub fn inner_form_bit(choice: &EmbeddingChoice) -> bool {
    (choice.parity_sum() + choice.u1_class.unwrap_or(false) as usize) % 2 == 1
}
