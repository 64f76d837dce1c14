//! Tame parameters `(ω, y)` with `φ(t̃) = exp(y)τ`, the restricted root
//! system on the `τ`-fixed part of the dual torus, and the invariants read
//! off from a parameter.
//!
//! Coordinates: a cocharacter `x` fixed by `τ` has `x_{-i} = -x_i` and
//! `x_0 = 0`; we write `y_i = x_i` for `i = 1..m`. The projected lattice
//! `P_τ Y` is `(½Z)^m` in these coordinates.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::algebra::{coinvariant_torsion, solve_rational};
use crate::error::{domain, input, Result};
use crate::tori::{build_twisted_lattice, elemental_decomposition, ElementalDecomposition, GaloisLattice};
use crate::weyl_signed::SignedPermutation;

pub type Rational = BigRational;

fn rat(a: i64, b: i64) -> Rational {
    Rational::new(a.into(), b.into())
}

fn half() -> Rational {
    rat(1, 2)
}

/// `x` lies in `½Z`.
fn in_half_lattice(x: &Rational) -> bool {
    (x * Rational::from_integer(2.into())).is_integer()
}

/// Representative of `x` modulo `½Z` in `[0, ½)`.
fn reduce_half(x: &Rational) -> Rational {
    let two_x = x * Rational::from_integer(2.into());
    (&two_x - two_x.floor()) / Rational::from_integer(2.into())
}

/// An affine functional `y ↦ constant + Σ coeffs_i y_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineFunctional {
    pub constant: Rational,
    pub coeffs: Vec<Rational>,
}

impl AffineFunctional {
    pub fn linear(coeffs: Vec<Rational>) -> Self {
        AffineFunctional { constant: Rational::zero(), coeffs }
    }

    pub fn eval(&self, y: &[Rational]) -> Rational {
        self.coeffs.iter().zip(y).fold(self.constant.clone(), |acc, (c, v)| acc + c * v)
    }
}

/// `Φ_τ`, a base `Δ_τ`, the highest root and the walls of the alcove
/// `C_τ = {y : γ_ι(y) > 0, 1 - γ̃_0(y) > 0}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictedRootDatum {
    pub n: usize,
    pub roots: Vec<Vec<Rational>>,
    pub simples: Vec<Vec<Rational>>,
    pub highest: Vec<Rational>,
    /// Simple-root walls first, then `1 - γ̃_0`.
    pub walls: Vec<AffineFunctional>,
}

impl RestrictedRootDatum {
    pub fn rank(&self) -> usize {
        self.n / 2
    }

    pub fn in_closed_alcove(&self, y: &[Rational]) -> bool {
        self.walls.iter().all(|w| !w.eval(y).is_negative())
    }

    pub fn in_open_alcove(&self, y: &[Rational]) -> bool {
        self.walls.iter().all(|w| w.eval(y).is_positive())
    }

    /// Walls on which `y` lies.
    pub fn walls_containing(&self, y: &[Rational]) -> Vec<usize> {
        (0..self.walls.len()).filter(|&k| self.walls[k].eval(y).is_zero()).collect()
    }

    /// Vertices of the closed alcove: each omits one wall and lies on the
    /// rest.
    pub fn vertices(&self) -> Result<Vec<Vec<Rational>>> {
        let m = self.rank();
        (0..self.walls.len())
            .map(|skip| {
                let (a, b): (Vec<_>, Vec<_>) = self
                    .walls
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| *k != skip)
                    .map(|(_, w)| (w.coeffs.clone(), -w.constant.clone()))
                    .unzip();
                debug_assert_eq!(a.len(), m);
                solve_rational(&a, &b)
            })
            .collect()
    }

    pub fn barycenter(&self) -> Result<Vec<Rational>> {
        let verts = self.vertices()?;
        let k = Rational::from_integer(BigInt::from(verts.len()));
        Ok((0..self.rank()).map(|i| verts.iter().map(|v| v[i].clone()).sum::<Rational>() / &k).collect())
    }
}

/// Value of `x_label` on the `τ`-fixed cocharacter with coordinates given
/// by `coeffs` (as a linear functional of `y`).
fn label_functional(m: usize, label: i32) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); m];
    if label != 0 {
        v[label.unsigned_abs() as usize - 1] = if label > 0 { Rational::one() } else { -Rational::one() };
    }
    v
}

/// Folds the roots of `GL_n` along `τ : χ_i ↦ -χ_{-i}`.
pub fn restricted_root_datum(n: usize) -> Result<RestrictedRootDatum> {
    if n < 2 {
        return input(format!("restricted roots need n >= 2, got {n}"));
    }
    let m = n / 2;
    let mi = m as i32;
    // positive order on labels: 1, …, m, 0, -m, …, -1
    let mut order: Vec<i32> = (1..=mi).collect();
    if n % 2 == 1 {
        order.push(0);
    }
    order.extend((1..=mi).rev().map(|i| -i));

    let mut roots: BTreeSet<Vec<Rational>> = BTreeSet::new();
    let mut positive: BTreeSet<Vec<Rational>> = BTreeSet::new();
    for (ia, &a) in order.iter().enumerate() {
        for (ib, &b) in order.iter().enumerate() {
            if a == b {
                continue;
            }
            let fa = label_functional(m, a);
            let fb = label_functional(m, b);
            let restricted: Vec<Rational> = fa.iter().zip(&fb).map(|(x, y)| x - y).collect();
            // a τ-orbit of size two contributes both of its restrictions
            let orbit_size = if b == -a { 1 } else { 2 };
            let gamma: Vec<Rational> =
                restricted.iter().map(|c| c * Rational::from_integer(orbit_size.into())).collect();
            if ia < ib {
                positive.insert(gamma.clone());
            }
            roots.insert(gamma);
        }
    }

    let mut simples: Vec<Vec<Rational>> = Vec::new();
    for i in 0..m {
        let mut s = vec![Rational::zero(); m];
        if i + 1 < m {
            s[i] = rat(2, 1);
            s[i + 1] = rat(-2, 1);
        } else {
            s[i] = rat(2, 1);
        }
        simples.push(s);
    }
    // coordinates of each positive root in the base; the highest has the
    // largest height
    let basis_t: Vec<Vec<Rational>> = (0..m).map(|r| simples.iter().map(|s| s[r].clone()).collect()).collect();
    let mut highest: Option<(Rational, Vec<Rational>)> = None;
    for root in &positive {
        let coeffs = solve_rational(&basis_t, root)?;
        if coeffs.iter().any(|c| c.is_negative() || !c.is_integer()) {
            return input("folded base does not span the positive roots");
        }
        let height: Rational = coeffs.iter().sum();
        if highest.as_ref().is_none_or(|(h, _)| height > *h) {
            highest = Some((height, root.clone()));
        }
    }
    let highest = highest.expect("at least one positive root").1;

    let mut walls: Vec<AffineFunctional> = simples.iter().cloned().map(AffineFunctional::linear).collect();
    walls.push(AffineFunctional { constant: Rational::one(), coeffs: highest.iter().map(|c| -c).collect() });

    Ok(RestrictedRootDatum { n, roots: roots.into_iter().collect(), simples, highest, walls })
}

/// `(w·y)_{|w(i)|} = sign(w(i)) y_i`.
pub fn act_on_point(w: &SignedPermutation, y: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); y.len()];
    for (k, v) in y.iter().enumerate() {
        let img = w.act(k as i32 + 1);
        out[img.unsigned_abs() as usize - 1] = if img > 0 { v.clone() } else { -v.clone() };
    }
    out
}

/// A tame parameter: `φ(t̃) = exp(y)τ` and `ω`, the image of `φ(Fr)` in
/// `W^τ`.
///
/// `central_bit` is the value on the nontrivial Néron component that the
/// central character takes in odd dimension; it is not determined by
/// `(ω, y)` and defaults to `false`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TameParameter {
    n: usize,
    omega: SignedPermutation,
    y: Vec<Rational>,
    central_bit: bool,
}

impl TameParameter {
    /// Checks shapes and that `y` lies in the closed alcove.
    pub fn new(n: usize, omega: SignedPermutation, y: Vec<Rational>) -> Result<Self> {
        if n < 2 {
            return input(format!("n must be at least 2, got {n}"));
        }
        let m = n / 2;
        if omega.rank() != m {
            return input(format!("omega has rank {}, expected {m}", omega.rank()));
        }
        if y.len() != m {
            return input(format!("y has {} coordinates, expected {m}", y.len()));
        }
        let datum = restricted_root_datum(n)?;
        if !datum.in_closed_alcove(&y) {
            return input("y lies outside the closed alcove");
        }
        Ok(TameParameter { n, omega, y, central_bit: false })
    }

    pub fn with_central_bit(mut self, bit: bool) -> Self {
        self.central_bit = bit;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.n / 2
    }

    pub fn omega(&self) -> &SignedPermutation {
        &self.omega
    }

    pub fn y(&self) -> &[Rational] {
        &self.y
    }

    pub fn central_bit(&self) -> bool {
        self.central_bit
    }
}

/// Backtracking search for `w` with `w·y - y ∈ (½Z)^m`. Stops early when
/// `visit` returns `false`.
fn search_stabilizer(y: &[Rational], mut visit: impl FnMut(&SignedPermutation) -> bool) {
    fn go(
        y: &[Rational],
        image: &mut Vec<i32>,
        used: &mut [bool],
        visit: &mut dyn FnMut(&SignedPermutation) -> bool,
    ) -> bool {
        let i = image.len();
        if i == y.len() {
            let w = SignedPermutation::new(image.clone()).expect("built as a signed permutation");
            return visit(&w);
        }
        for k in 0..y.len() {
            if used[k] {
                continue;
            }
            for sign in [1i32, -1] {
                let moved = if sign > 0 { y[i].clone() } else { -y[i].clone() };
                if !in_half_lattice(&(moved - &y[k])) {
                    continue;
                }
                used[k] = true;
                image.push(sign * (k as i32 + 1));
                let keep_going = go(y, image, used, visit);
                image.pop();
                used[k] = false;
                if !keep_going {
                    return false;
                }
            }
        }
        true
    }
    go(y, &mut Vec::new(), &mut vec![false; y.len()], &mut visit);
}

/// `{w ∈ W^τ : w·y - y ∈ P_τ Y}`, the image of the stabilizer of `y` in the
/// extended affine Weyl group.
pub fn w_stabilizer(p: &TameParameter) -> Vec<SignedPermutation> {
    let mut out = Vec::new();
    search_stabilizer(&p.y, |w| {
        out.push(w.clone());
        true
    });
    out.sort();
    out
}

/// Whether the stabilizer of `y` is trivial, without enumerating it.
pub fn has_trivial_stabilizer(y: &[Rational]) -> bool {
    let mut trivial = true;
    search_stabilizer(y, |w| {
        trivial = w.is_identity();
        trivial
    });
    trivial
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub tame: bool,
    pub discrete: bool,
    pub regular: bool,
    pub diagnostics: Vec<String>,
}

impl ValidationReport {
    pub fn all_ok(&self) -> bool {
        self.tame && self.discrete && self.regular
    }
}

pub fn validate(p: &TameParameter) -> ValidationReport {
    let mut diagnostics = Vec::new();
    let discrete = p.omega.is_elliptic();
    if !discrete {
        diagnostics.push(format!(
            "not discrete: omega = {} has positive cycles (signed cycle type {})",
            p.omega,
            p.omega.signed_cycle_type()
        ));
    }
    let regular = has_trivial_stabilizer(&p.y);
    if !regular {
        let order = w_stabilizer(p).len();
        diagnostics.push(format!("not regular: the stabilizer of y in W^tau has order {order}"));
    }
    ValidationReport { tame: true, discrete, regular, diagnostics }
}

fn require_discrete(p: &TameParameter) -> Result<()> {
    if !p.omega.is_elliptic() {
        return domain(format!("parameter is not discrete: omega = {} is not elliptic", p.omega));
    }
    Ok(())
}

fn require_discrete_regular(p: &TameParameter) -> Result<()> {
    require_discrete(p)?;
    if !has_trivial_stabilizer(&p.y) {
        return domain("parameter is not regular: y has a nontrivial stabilizer");
    }
    Ok(())
}

/// The anisotropic torus attached to a discrete parameter.
pub fn construct_torus(p: &TameParameter) -> Result<GaloisLattice> {
    require_discrete(p)?;
    build_twisted_lattice(p.n, &p.omega)
}

pub fn decomposition(p: &TameParameter) -> Result<ElementalDecomposition> {
    require_discrete(p)?;
    elemental_decomposition(p.n, &p.omega)
}

/// Elementary divisors of `A_φ`, computed as the torsion of the
/// coinvariants of `X^*(T)` under `τ` and Frobenius.
#[allow(non_snake_case)]
pub fn compute_A_phi(p: &TameParameter) -> Result<Vec<BigInt>> {
    require_discrete_regular(p)?;
    let lat = build_twisted_lattice(p.n, &p.omega)?;
    coinvariant_torsion(&[lat.tau_action, lat.frob_action])
}

/// The depth-zero character `χ_φ` on `T̄(k) = ∏ μ_{q^{r_i}+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterData {
    /// `e_i` modulo `q^{r_i} + 1`, one per `s = 2r` factor.
    pub exponents: Vec<BigInt>,
    pub moduli: Vec<BigInt>,
    /// Value on the nontrivial Néron component, odd `n` only.
    pub u1_bit: Option<bool>,
}

/// `ω·y ≡ q·y (mod P_τ Y)`, the relation `φ(Fr) φ(t̃) φ(Fr)^{-1} = φ(t̃)^q`.
pub fn is_frobenius_compatible(omega: &SignedPermutation, y: &[Rational], q: u64) -> bool {
    let qq = Rational::from_integer(q.into());
    act_on_point(omega, y).iter().zip(y).all(|(wy, v)| in_half_lattice(&(wy - &qq * v)))
}

/// Reads `χ_φ` off a Frobenius-compatible `y`.
///
/// On a negative cycle `s_1 → … → s_r → -s_1` compatibility forces
/// `y_{s_1} ∈ (1 / 2(q^r+1)) Z` modulo `½`, and the other coordinates of the
/// cycle are determined by it. The exponent is `e = 2(q^r+1) y_{s_1}`
/// modulo `q^r + 1`, which identifies compatible points modulo `P_τ Y` with
/// `∏ Z/(q^{r_i}+1)` equivariantly for the centralizer of `ω`.
pub fn character_data(p: &TameParameter, q: u64) -> Result<CharacterData> {
    require_discrete_regular(p)?;
    if !is_frobenius_compatible(&p.omega, &p.y, q) {
        return input("y incompatible with q");
    }
    let dec = elemental_decomposition(p.n, &p.omega)?;
    let mut exponents = Vec::new();
    let mut moduli = Vec::new();
    for f in dec.even_factors() {
        let modulus = num_traits::pow(BigInt::from(q), f.r) + 1;
        let lead = &p.y[f.cycle[0] as usize - 1];
        let scaled = lead * Rational::from_integer(&modulus * 2);
        if !scaled.is_integer() {
            return input("y incompatible with q");
        }
        exponents.push(scaled.to_integer().mod_floor(&modulus));
        moduli.push(modulus);
    }
    Ok(CharacterData { exponents, moduli, u1_bit: dec.has_u1.then_some(p.central_bit) })
}

/// Whether no nontrivial element of the Weyl group of `T̄` in the
/// reduction fixes the exponents.
///
/// That group is generated by `e_i ↦ q e_i` on each factor (of order `2r`,
/// containing `e_i ↦ -e_i`) and by swaps of factors of equal size.
pub fn is_general_position(cd: &CharacterData, dec: &ElementalDecomposition, q: u64) -> Result<bool> {
    let factors: Vec<_> = dec.even_factors().collect();
    if factors.len() != cd.exponents.len() {
        return input("character data does not match the decomposition");
    }
    let qb = BigInt::from(q);
    let orbit = |e: &BigInt, r: usize| -> Vec<BigInt> {
        let modulus = num_traits::pow(qb.clone(), r) + 1;
        let mut out = Vec::with_capacity(2 * r);
        let mut x = e.mod_floor(&modulus);
        for _ in 0..2 * r {
            out.push(x.clone());
            x = (&x * &qb).mod_floor(&modulus);
        }
        out
    };
    for (i, f) in factors.iter().enumerate() {
        let o = orbit(&cd.exponents[i], f.r);
        if o[1..].contains(&o[0]) {
            return Ok(false);
        }
        for (k, g) in factors.iter().enumerate().skip(i + 1) {
            if g.r == f.r && o.contains(&cd.exponents[k]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// All Frobenius-compatible points of the closed alcove for `(n, ω, q)`.
///
/// Each coordinate is determined modulo `½` by the exponent of its cycle;
/// both representatives `0` and `½` are tried for a zero residue.
pub fn compatible_alcove_points(n: usize, omega: &SignedPermutation, q: u64) -> Result<Vec<Vec<Rational>>> {
    let dec = elemental_decomposition(n, omega)?;
    let datum = restricted_root_datum(n)?;
    let m = n / 2;
    let mut per_cycle: Vec<Vec<Vec<(usize, Rational)>>> = Vec::new();
    for f in dec.even_factors() {
        let modulus: BigInt = num_traits::pow(BigInt::from(q), f.r) + 1;
        let bound = modulus.to_u64().ok_or_else(|| crate::Error::Input("q^r too large to enumerate".into()))?;
        let mut options = Vec::new();
        for a in 0..bound {
            let lead = Rational::new(BigInt::from(a), &modulus * 2);
            // y_{s_{t+1}} ≡ y_{s_t} / q, taken modulo ½ along the cycle
            let mut coords = Vec::with_capacity(f.r);
            let mut cur = lead.clone();
            for (t, &s) in f.cycle.iter().enumerate() {
                if t > 0 {
                    cur = reduce_half(&cycle_step(&cur, q, &modulus));
                }
                coords.push((s as usize - 1, cur.clone()));
            }
            options.push(coords);
        }
        per_cycle.push(options);
    }
    let mut points: Vec<Vec<Rational>> = vec![vec![Rational::zero(); m]];
    for options in per_cycle {
        points = points
            .into_iter()
            .flat_map(|p| {
                options.iter().map(move |coords| {
                    let mut next = p.clone();
                    for (k, v) in coords {
                        next[*k] = v.clone();
                    }
                    next
                })
            })
            .collect();
    }
    let mut out = Vec::new();
    for p in points {
        // swap zero residues for ½ in every combination
        let zeros: Vec<usize> = (0..m).filter(|&k| p[k].is_zero()).collect();
        for mask in 0u64..1 << zeros.len() {
            let mut cand = p.clone();
            for (bit, &k) in zeros.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    cand[k] = half();
                }
            }
            if datum.in_closed_alcove(&cand) && is_frobenius_compatible(omega, &cand, q) {
                out.push(cand);
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

// y / q modulo ½ on the lattice (1 / 2(q^r+1)) Z: multiply the numerator by
// the inverse of q modulo q^r + 1
fn cycle_step(y: &Rational, q: u64, modulus: &BigInt) -> Rational {
    let scaled = (y * Rational::from_integer(modulus * 2)).to_integer();
    let inv = mod_inverse(&BigInt::from(q), modulus).expect("q is a unit modulo q^r + 1");
    Rational::new((scaled * inv).mod_floor(modulus), modulus * 2)
}

fn mod_inverse(a: &BigInt, modulus: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(modulus);
    e.gcd.is_one().then(|| e.x.mod_floor(modulus))
}
