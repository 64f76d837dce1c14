//! Galois-twisted character lattices of maximal tori in `U_n` and the
//! decomposition of anisotropic ones into elemental factors.

use num_bigint::BigInt;
use num_traits::One;

use crate::algebra::{fixed_sublattice, IntMatrix};
use crate::error::{domain, input, Result};
use crate::weyl_signed::SignedPermutation;

/// `X^*(T)` with the actions of the ramified involution `τ` and of
/// Frobenius acting through `ω`.
///
/// Basis order is `χ_{-m}, …, χ_{-1}, [χ_0], χ_1, …, χ_m`; matrices act on
/// column vectors, column `k` holding the image of basis vector `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaloisLattice {
    pub n: usize,
    pub omega: SignedPermutation,
    pub tau_action: IntMatrix,
    pub frob_action: IntMatrix,
}

impl GaloisLattice {
    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.n / 2
    }

    /// Position of `χ_label` in the basis.
    pub fn position(&self, label: i32) -> usize {
        basis_position(self.n, label)
    }

    /// Basis labels in order.
    pub fn labels(&self) -> Vec<i32> {
        basis_labels(self.n)
    }
}

fn basis_labels(n: usize) -> Vec<i32> {
    let m = (n / 2) as i32;
    let mut labels: Vec<i32> = (-m..0).collect();
    if n % 2 == 1 {
        labels.push(0);
    }
    labels.extend(1..=m);
    labels
}

fn basis_position(n: usize, label: i32) -> usize {
    let m = (n / 2) as i32;
    let odd = (n % 2) as i32;
    let pos = if label < 0 {
        label + m
    } else if label == 0 {
        m
    } else {
        m + label - 1 + odd
    };
    pos as usize
}

/// Builds `X^*(T)` for the torus twisted by `ω ∈ W^τ`.
pub fn build_twisted_lattice(n: usize, omega: &SignedPermutation) -> Result<GaloisLattice> {
    if n == 0 || omega.rank() != n / 2 {
        return input(format!("rank mismatch: n = {n} needs rank {}, got {}", n / 2, omega.rank()));
    }
    let mut tau = IntMatrix::zeros(n, n);
    let mut frob = IntMatrix::zeros(n, n);
    for label in basis_labels(n) {
        let col = basis_position(n, label);
        tau[(basis_position(n, -label), col)] = BigInt::from(-1);
        frob[(basis_position(n, omega.act(label)), col)] = BigInt::one();
    }
    Ok(GaloisLattice { n, omega: omega.clone(), tau_action: tau, frob_action: frob })
}

/// The torus is anisotropic iff no nonzero character is fixed by both
/// actions.
pub fn is_anisotropic(lat: &GaloisLattice) -> bool {
    fixed_sublattice(&[lat.tau_action.clone(), lat.frob_action.clone()]).map(|basis| basis.cols() == 0).unwrap_or(false)
}

/// One factor `T_s` of the decomposition. The `U_1` factor has `s = 1`,
/// `r = 0` and an empty cycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusFactor {
    pub s: usize,
    pub r: usize,
    pub cycle: Vec<i32>,
}

impl TorusFactor {
    pub fn is_u1(&self) -> bool {
        self.r == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementalDecomposition {
    pub n: usize,
    pub factors: Vec<TorusFactor>,
    pub has_u1: bool,
}

impl ElementalDecomposition {
    /// Number of factors, counting `U_1`.
    pub fn j(&self) -> usize {
        self.factors.len()
    }

    /// The `s = 2r` factors, in order.
    pub fn even_factors(&self) -> impl Iterator<Item = &TorusFactor> {
        self.factors.iter().filter(|f| !f.is_u1())
    }

    pub fn even_count(&self) -> usize {
        self.even_factors().count()
    }

    /// A decomposition with the given half-dimensions, cycles laid out on
    /// consecutive indices. Useful when only the shape matters.
    pub fn from_shape(rs: &[usize], has_u1: bool) -> Result<Self> {
        if rs.contains(&0) {
            return input("factor half-dimension must be positive");
        }
        let mut factors = Vec::new();
        let mut next = 1i32;
        for &r in rs {
            factors.push(TorusFactor { s: 2 * r, r, cycle: (next..next + r as i32).collect() });
            next += r as i32;
        }
        if has_u1 {
            factors.push(TorusFactor { s: 1, r: 0, cycle: Vec::new() });
        }
        let n = 2 * (next as usize - 1) + has_u1 as usize;
        Ok(ElementalDecomposition { n, factors, has_u1 })
    }
}

/// `T ≅ ∏ T_{2r_i} (× U_1)`, one factor per negative cycle of `ω`.
pub fn elemental_decomposition(n: usize, omega: &SignedPermutation) -> Result<ElementalDecomposition> {
    if n == 0 || omega.rank() != n / 2 {
        return input(format!("rank mismatch: n = {n} needs rank {}, got {}", n / 2, omega.rank()));
    }
    if !omega.is_elliptic() {
        return domain("torus not anisotropic");
    }
    let mut factors: Vec<TorusFactor> =
        omega.cycles().into_iter().map(|c| TorusFactor { s: 2 * c.len(), r: c.len(), cycle: c.indices }).collect();
    let has_u1 = n % 2 == 1;
    if has_u1 {
        factors.push(TorusFactor { s: 1, r: 0, cycle: Vec::new() });
    }
    Ok(ElementalDecomposition { n, factors, has_u1 })
}

/// Order of the component group of the Néron model of an anisotropic
/// maximal torus of `U_n`.
pub fn neron_component_order(n: usize) -> u32 {
    if n.is_multiple_of(2) {
        1
    } else {
        2
    }
}

/// Orders of the depth-zero quotients of the factors: `q^r + 1` for
/// `T_{2r}`, and `1` for `U_1`.
pub fn tbar_orders(dec: &ElementalDecomposition, q: u64) -> Vec<BigInt> {
    dec.factors
        .iter()
        .map(|f| if f.is_u1() { BigInt::one() } else { num_traits::pow(BigInt::from(q), f.r) + 1 })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl_signed::elements;

    #[test]
    fn untwisted_plane() {
        let lat = build_twisted_lattice(2, &SignedPermutation::identity(1)).unwrap();
        assert_eq!(lat.frob_action, IntMatrix::identity(2));
        assert_eq!(lat.tau_action, IntMatrix::from_rows(&[vec![0, -1], vec![-1, 0]]).unwrap());
        assert!(!is_anisotropic(&lat));
    }

    #[test]
    fn actions_commute_and_tau_is_involution() {
        for m in 1..=3 {
            for w in elements(m) {
                for n in [2 * m, 2 * m + 1] {
                    let lat = build_twisted_lattice(n, &w).unwrap();
                    let tf = lat.tau_action.mul(&lat.frob_action).unwrap();
                    let ft = lat.frob_action.mul(&lat.tau_action).unwrap();
                    assert_eq!(tf, ft);
                    let tt = lat.tau_action.mul(&lat.tau_action).unwrap();
                    assert_eq!(tt, IntMatrix::identity(n));
                }
            }
        }
    }

    #[test]
    fn chi0_is_fixed_by_frobenius() {
        let w = SignedPermutation::parse("(1 2 -1 -2)", 2).unwrap();
        let lat = build_twisted_lattice(5, &w).unwrap();
        let k = lat.position(0);
        let row: Vec<i64> = lat.frob_action.row(k).iter().map(|x| i64::try_from(x).unwrap()).collect();
        assert_eq!(row, vec![0, 0, 1, 0, 0]);
        let eta = build_twisted_lattice(4, &SignedPermutation::eta(2)).unwrap();
        let sq = eta.frob_action.mul(&eta.frob_action).unwrap();
        assert_eq!(sq, IntMatrix::identity(4));
        assert_ne!(eta.frob_action, IntMatrix::identity(4));
    }

    #[test]
    fn anisotropic_iff_elliptic() {
        for m in 1..=3 {
            for w in elements(m) {
                for n in [2 * m, 2 * m + 1] {
                    let lat = build_twisted_lattice(n, &w).unwrap();
                    assert_eq!(is_anisotropic(&lat), w.is_elliptic(), "{w} n={n}");
                }
            }
        }
    }

    #[test]
    fn decompositions() {
        let d = elemental_decomposition(6, &SignedPermutation::coxeter(3)).unwrap();
        assert_eq!(d.factors.iter().map(|f| f.s).collect::<Vec<_>>(), vec![6]);
        assert_eq!(d.j(), 1);
        let d = elemental_decomposition(4, &SignedPermutation::eta(2)).unwrap();
        assert_eq!(d.factors.iter().map(|f| f.s).collect::<Vec<_>>(), vec![2, 2]);
        let d = elemental_decomposition(5, &SignedPermutation::eta(2)).unwrap();
        assert_eq!(d.factors.iter().map(|f| f.s).collect::<Vec<_>>(), vec![2, 2, 1]);
        assert_eq!(d.j(), 3);
        let err = elemental_decomposition(4, &SignedPermutation::identity(2)).unwrap_err();
        assert_eq!(err, crate::Error::Domain("torus not anisotropic".into()));
        assert!(elemental_decomposition(5, &SignedPermutation::eta(3)).is_err());
    }

    #[test]
    fn tbar_and_neron() {
        let big = |xs: &[i64]| xs.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        let d = ElementalDecomposition::from_shape(&[1], false).unwrap();
        assert_eq!(tbar_orders(&d, 3), big(&[4]));
        let d = ElementalDecomposition::from_shape(&[3], false).unwrap();
        assert_eq!(tbar_orders(&d, 3), big(&[28]));
        let d = ElementalDecomposition::from_shape(&[1, 1], true).unwrap();
        assert_eq!(d.n, 5);
        assert_eq!(tbar_orders(&d, 5), big(&[6, 6, 1]));
        assert_eq!((neron_component_order(4), neron_component_order(5), neron_component_order(1)), (1, 2, 2));
    }

    #[test]
    fn norm_one_subgroup_of_f9() {
        // F_9 = F_3[i], i^2 = -1; count x with x^{q+1} = 1
        let mul =
            |(a, b): (i64, i64), (c, d): (i64, i64)| ((a * c - b * d).rem_euclid(3), (a * d + b * c).rem_euclid(3));
        let mut count = 0;
        for a in 0..3 {
            for b in 0..3 {
                let x = (a, b);
                let x4 = mul(mul(x, x), mul(x, x));
                if x4 == (1, 0) {
                    count += 1;
                }
            }
        }
        let d = ElementalDecomposition::from_shape(&[1], false).unwrap();
        assert_eq!(tbar_orders(&d, 3), vec![BigInt::from(count)]);
    }
}
