//! The hyperoctahedral group `B_m` of signed permutations of `{±1, …, ±m}`.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;

use crate::algebra::{partitions, Partition};
use crate::error::{input, Result};

/// A signed permutation, stored by its images of `1..=m`.
///
/// `w(-i) = -w(i)` is implied. Index `0` is fixed by every element, which is
/// convenient for the extra basis vector in odd dimension.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedPermutation {
    image: Vec<i32>,
}

/// One orbit pair of a signed permutation, traversed from its smallest
/// absolute index.
///
/// `indices` lists `a, w(a), …, w^{r-1}(a)`; the cycle is negative when
/// `w^r(a) = -a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedCycle {
    pub indices: Vec<i32>,
    pub negative: bool,
}

impl SignedCycle {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Smallest absolute index in the cycle (always the first entry).
    pub fn min_index(&self) -> usize {
        self.indices[0].unsigned_abs() as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedCycleType {
    /// Lengths of positive cycles.
    pub mu: Partition,
    /// Lengths of negative cycles.
    pub nu: Partition,
}

impl SignedCycleType {
    pub fn rank(&self) -> usize {
        self.mu.weight() + self.nu.weight()
    }

    pub fn is_elliptic(&self) -> bool {
        self.mu.is_empty()
    }

    /// Size of the conjugacy class with this type in `B_m`:
    /// `2^m m! / prod_r (2r)^{a_r} a_r! (2r)^{b_r} b_r!`.
    pub fn class_size(&self) -> BigUint {
        let m = self.rank();
        let mut num = BigUint::one() << m;
        for k in 2..=m {
            num *= k;
        }
        let mut den = BigUint::one();
        for part in [&self.mu, &self.nu] {
            for (r, count) in part.multiplicities() {
                for k in 1..=count {
                    den *= 2 * r * k;
                }
            }
        }
        num / den
    }
}

impl fmt::Display for SignedCycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "mu={} nu={}", self.mu, self.nu)
    }
}

impl SignedPermutation {
    /// Builds an element from the images of `1..=m`.
    pub fn new(image: Vec<i32>) -> Result<Self> {
        let m = image.len();
        let mut seen = vec![false; m + 1];
        for &x in &image {
            let a = x.unsigned_abs() as usize;
            if a == 0 || a > m {
                return input(format!("image {x} out of range for rank {m}"));
            }
            if std::mem::replace(&mut seen[a], true) {
                return input(format!("index {a} hit twice"));
            }
        }
        Ok(SignedPermutation { image })
    }

    pub fn identity(m: usize) -> Self {
        SignedPermutation { image: (1..=m as i32).collect() }
    }

    /// The reflection `ω_{i,-i}` swapping `i` and `-i`.
    pub fn reflection(m: usize, i: usize) -> Result<Self> {
        if i == 0 || i > m {
            return input(format!("reflection index {i} out of range for rank {m}"));
        }
        let mut w = Self::identity(m);
        w.image[i - 1] = -(i as i32);
        Ok(w)
    }

    /// `η = ∏ ω_{i,-i}`, i.e. `i ↦ -i` for all `i`.
    pub fn eta(m: usize) -> Self {
        SignedPermutation { image: (1..=m as i32).map(|i| -i).collect() }
    }

    /// The negative `m`-cycle `1 → 2 → … → m → -1`.
    pub fn coxeter(m: usize) -> Self {
        let mut image: Vec<i32> = (2..=m as i32 + 1).collect();
        if let Some(last) = image.last_mut() {
            *last = -1;
        }
        SignedPermutation { image }
    }

    pub fn rank(&self) -> usize {
        self.image.len()
    }

    pub fn images(&self) -> &[i32] {
        &self.image
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(k, &x)| x == k as i32 + 1)
    }

    /// Image of a signed index. `act(0) = 0`.
    ///
    /// # Panics
    /// If `|i| > m`.
    pub fn act(&self, i: i32) -> i32 {
        match i {
            0 => 0,
            i if i > 0 => self.image[i as usize - 1],
            i => -self.image[(-i) as usize - 1],
        }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &SignedPermutation) -> Result<SignedPermutation> {
        if self.rank() != other.rank() {
            return input(format!("rank mismatch: {} vs {}", self.rank(), other.rank()));
        }
        Ok(SignedPermutation { image: other.image.iter().map(|&x| self.act(x)).collect() })
    }

    pub fn inverse(&self) -> SignedPermutation {
        let mut image = vec![0; self.rank()];
        for (k, &x) in self.image.iter().enumerate() {
            let i = k as i32 + 1;
            if x > 0 {
                image[x as usize - 1] = i;
            } else {
                image[(-x) as usize - 1] = -i;
            }
        }
        SignedPermutation { image }
    }

    /// `g w g^{-1}`.
    pub fn conjugate_by(&self, g: &SignedPermutation) -> Result<SignedPermutation> {
        g.compose(self)?.compose(&g.inverse())
    }

    pub fn order(&self) -> usize {
        let mut p = self.clone();
        let mut k = 1;
        while !p.is_identity() {
            p = self.compose(&p).expect("same rank");
            k += 1;
        }
        k
    }

    /// Cycle decomposition, one entry per orbit pair, ordered by smallest
    /// absolute index.
    pub fn cycles(&self) -> Vec<SignedCycle> {
        let m = self.rank();
        let mut visited = vec![false; m + 1];
        let mut out = Vec::new();
        for a in 1..=m {
            if visited[a] {
                continue;
            }
            let start = a as i32;
            let mut indices = vec![start];
            visited[a] = true;
            let mut x = self.act(start);
            while x.abs() != start {
                visited[x.unsigned_abs() as usize] = true;
                indices.push(x);
                x = self.act(x);
            }
            out.push(SignedCycle { indices, negative: x == -start });
        }
        out
    }

    pub fn negative_cycles(&self) -> Vec<SignedCycle> {
        self.cycles().into_iter().filter(|c| c.negative).collect()
    }

    pub fn signed_cycle_type(&self) -> SignedCycleType {
        let (mut mu, mut nu) = (Vec::new(), Vec::new());
        for c in self.cycles() {
            if c.negative {
                nu.push(c.len())
            } else {
                mu.push(c.len())
            }
        }
        SignedCycleType {
            mu: Partition::new(mu).expect("cycle lengths are positive"),
            nu: Partition::new(nu).expect("cycle lengths are positive"),
        }
    }

    /// No positive cycles.
    pub fn is_elliptic(&self) -> bool {
        self.cycles().iter().all(|c| c.negative)
    }

    /// Parses cycle notation such as `"(1 -2)(3 -3)"` for an element of
    /// rank `m`.
    ///
    /// A group containing both `a` and `-a` is a full negative orbit and
    /// must have the shape `(a_1 … a_r -a_1 … -a_r)`. Any other group is one
    /// orbit of a positive cycle; its negative is implied. Indices that do
    /// not appear are fixed. `"()"` and the empty string denote the identity.
    pub fn parse(text: &str, m: usize) -> Result<SignedPermutation> {
        let mut image: Vec<Option<i32>> = vec![None; m];
        let mut rest = text.trim();
        while !rest.is_empty() {
            let Some(body) = rest.strip_prefix('(') else {
                return input(format!("expected '(' in cycle notation at {rest:?}"));
            };
            let Some(close) = body.find(')') else {
                return input("unclosed '(' in cycle notation");
            };
            let group = body[..close]
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<i32>().map_err(|_| crate::Error::Input(format!("bad index {t:?} in cycle"))))
                .collect::<Result<Vec<i32>>>()?;
            rest = body[close + 1..].trim_start();
            if group.is_empty() {
                continue;
            }
            for &x in &group {
                if x == 0 || x.unsigned_abs() as usize > m {
                    return input(format!("index {x} out of range for rank {m}"));
                }
            }
            let abs: HashSet<u32> = group.iter().map(|x| x.unsigned_abs()).collect();
            let self_paired = abs.len() < group.len();
            if self_paired {
                let r = group.len() / 2;
                let well_formed = group.len() % 2 == 0 && abs.len() == r && (0..r).all(|t| group[t + r] == -group[t]);
                if !well_formed {
                    return input(format!("malformed negative cycle {group:?}"));
                }
            }
            for (k, &x) in group.iter().enumerate() {
                let y = group[(k + 1) % group.len()];
                set_image(&mut image, x, y)?;
                if !self_paired {
                    set_image(&mut image, -x, -y)?;
                }
            }
        }
        let image = image.into_iter().enumerate().map(|(k, v)| v.unwrap_or(k as i32 + 1)).collect();
        SignedPermutation::new(image)
    }
}

fn set_image(image: &mut [Option<i32>], x: i32, y: i32) -> Result<()> {
    let (slot, val) = if x > 0 { (x as usize - 1, y) } else { ((-x) as usize - 1, -y) };
    match image[slot] {
        Some(prev) if prev != val => input(format!("conflicting images for index {}", slot + 1)),
        _ => {
            image[slot] = Some(val);
            Ok(())
        }
    }
}

impl fmt::Display for SignedPermutation {
    /// Cycle notation; positive 1-cycles are omitted and the identity prints
    /// as `()`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for c in self.cycles() {
            if !c.negative && c.len() == 1 {
                continue;
            }
            let mut items: Vec<i32> = c.indices.clone();
            if c.negative {
                items.extend(c.indices.iter().map(|x| -x));
            }
            let items: Vec<String> = items.iter().map(ToString::to_string).collect();
            write!(f, "({})", items.join(" "))?;
            wrote = true;
        }
        if !wrote {
            write!(f, "()")?;
        }
        Ok(())
    }
}

/// A conjugacy class of `B_m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugacyClass {
    pub cycle_type: SignedCycleType,
    pub size: BigUint,
    pub elliptic: bool,
}

/// All conjugacy classes of `B_m`, one per signed cycle type.
///
/// Ordered by `|mu|` descending, then `mu` and `nu` lexicographically
/// decreasing.
pub fn conjugacy_classes(m: usize) -> Vec<ConjugacyClass> {
    let mut out = Vec::new();
    for k in (0..=m).rev() {
        for mu in partitions(k) {
            for nu in partitions(m - k) {
                let cycle_type = SignedCycleType { mu: mu.clone(), nu };
                out.push(ConjugacyClass {
                    size: cycle_type.class_size(),
                    elliptic: cycle_type.is_elliptic(),
                    cycle_type,
                });
            }
        }
    }
    out
}

/// A representative of the given type: negative cycles on the lowest
/// indices, then positive cycles, each on consecutive indices.
pub fn representative(t: &SignedCycleType) -> SignedPermutation {
    let mut image = Vec::with_capacity(t.rank());
    let mut next = 1i32;
    let blocks = t.nu.parts().iter().map(|&r| (r, true)).chain(t.mu.parts().iter().map(|&r| (r, false)));
    for (r, negative) in blocks {
        let start = next;
        for k in 0..r as i32 {
            let last = k == r as i32 - 1;
            image.push(match (last, negative) {
                (false, _) => start + k + 1,
                (true, false) => start,
                (true, true) => -start,
            });
        }
        next += r as i32;
    }
    SignedPermutation { image }
}

/// Every element of `B_m`, for small `m`.
pub fn elements(m: usize) -> Vec<SignedPermutation> {
    fn perms(current: &mut Vec<i32>, used: &mut Vec<bool>, m: usize, out: &mut Vec<Vec<i32>>) {
        if current.len() == m {
            out.push(current.clone());
            return;
        }
        for a in 1..=m {
            if used[a] {
                continue;
            }
            used[a] = true;
            for s in [1, -1] {
                current.push(s * a as i32);
                perms(current, used, m, out);
                current.pop();
            }
            used[a] = false;
        }
    }
    let mut out = Vec::new();
    perms(&mut Vec::new(), &mut vec![false; m + 1], m, &mut out);
    out.into_iter().map(|image| SignedPermutation { image }).collect()
}

/// `|Z_{S_{2m}}(η)| = 2^m m!`.
pub fn centralizer_order_eta(m: usize) -> BigUint {
    (1..=m).fold(BigUint::one() << m, |acc, k| acc * k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn basic_group_ops() {
        let w = SignedPermutation::new(vec![-2, 3, 1]).unwrap();
        assert!(w.compose(&w.inverse()).unwrap().is_identity());
        assert_eq!(SignedPermutation::reflection(3, 1).unwrap().act(1), -1);
        assert_eq!(w.act(-1), 2);
        assert!(w.compose(&SignedPermutation::identity(2)).is_err());
        assert!(SignedPermutation::new(vec![1, 1]).is_err());
        assert!(SignedPermutation::new(vec![3, 1]).is_err());
    }

    #[test]
    fn associativity_b3() {
        let els = elements(3);
        for (k, a) in els.iter().enumerate().step_by(5) {
            let b = &els[(k * 7 + 3) % els.len()];
            let c = &els[(k * 11 + 1) % els.len()];
            let left = a.compose(b).unwrap().compose(c).unwrap();
            let right = a.compose(&b.compose(c).unwrap()).unwrap();
            assert_eq!(left, right);
        }
    }

    #[test]
    fn cycle_types() {
        let id = SignedPermutation::identity(3);
        assert_eq!(id.signed_cycle_type(), SignedCycleType { mu: p(&[1, 1, 1]), nu: p(&[]) });
        let w = SignedPermutation::reflection(3, 1)
            .unwrap()
            .compose(&SignedPermutation::reflection(3, 2).unwrap())
            .unwrap();
        assert_eq!(w.signed_cycle_type(), SignedCycleType { mu: p(&[1]), nu: p(&[1, 1]) });
        let c = SignedPermutation::coxeter(3);
        assert_eq!(c.signed_cycle_type(), SignedCycleType { mu: p(&[]), nu: p(&[3]) });
        assert!(c.is_elliptic() && SignedPermutation::eta(4).is_elliptic());
        assert!(!id.is_elliptic());
        assert_eq!(c.order(), 6);
    }

    #[test]
    fn notation_round_trip() {
        for m in 1..=3 {
            for w in elements(m) {
                let text = w.to_string();
                assert_eq!(SignedPermutation::parse(&text, m).unwrap(), w, "{text}");
            }
        }
        assert_eq!(SignedPermutation::coxeter(2).to_string(), "(1 2 -1 -2)");
        assert_eq!(SignedPermutation::eta(2).to_string(), "(1 -1)(2 -2)");
        assert_eq!(SignedPermutation::identity(2).to_string(), "()");
        let w = SignedPermutation::parse("(1 -2)(3 -3)", 3).unwrap();
        assert_eq!(w.images(), &[-2, -1, -3]);
    }

    #[test]
    fn parse_rejects_bad_input() {
        assert!(SignedPermutation::parse("(1 2", 2).is_err());
        assert!(SignedPermutation::parse("(1 3)", 2).is_err());
        assert!(SignedPermutation::parse("(1 x)", 2).is_err());
        assert!(SignedPermutation::parse("(1 2)(1 -2)", 2).is_err());
        assert!(SignedPermutation::parse("(1 -1 2)", 2).is_err());
        assert!(SignedPermutation::parse("(1 2 -2 -1)", 2).is_err());
        assert!(SignedPermutation::parse("1 2", 2).is_err());
    }

    #[test]
    fn class_counts_and_sizes() {
        for (m, count) in [(1, 2), (2, 5), (3, 10), (4, 20)] {
            let classes = conjugacy_classes(m);
            assert_eq!(classes.len(), count);
            let total: BigUint = classes.iter().map(|c| c.size.clone()).sum();
            assert_eq!(total, centralizer_order_eta(m));
        }
        for m in 1..=6 {
            let elliptic = conjugacy_classes(m).iter().filter(|c| c.elliptic).count();
            assert_eq!(elliptic, partitions(m).len());
        }
    }

    #[test]
    fn representatives_have_their_type() {
        for m in 1..=5 {
            for c in conjugacy_classes(m) {
                assert_eq!(representative(&c.cycle_type).signed_cycle_type(), c.cycle_type);
            }
        }
    }

    #[test]
    fn eta_centralizer_in_s2m() {
        // points 0..2m-1 encode i and -i as 2(i-1) and 2(i-1)+1
        fn permutations(n: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in permutations(n - 1) {
                for pos in 0..=p.len() {
                    let mut q = p.clone();
                    q.insert(pos, n - 1);
                    out.push(q);
                }
            }
            out
        }
        for m in 1..=3usize {
            let eta: Vec<usize> = (0..2 * m).map(|x| x ^ 1).collect();
            let count = permutations(2 * m).into_iter().filter(|s| (0..2 * m).all(|x| s[eta[x]] == eta[s[x]])).count();
            assert_eq!(BigUint::from(count), centralizer_order_eta(m));
        }
        assert_eq!(centralizer_order_eta(2), BigUint::from(8u32));
    }
}
