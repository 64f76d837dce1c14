//! Exact integer and rational linear algebra.
//!
//! Everything here works over `BigInt`/`BigRational`; no floating point is
//! used anywhere in the crate.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{input, Result};

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows of `i64`. All rows must have equal length.
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return input("ragged rows in matrix literal");
        }
        let data = rows.iter().flatten().map(|&x| BigInt::from(x)).collect();
        Ok(IntMatrix { rows: rows.len(), cols, data })
    }

    pub fn from_big_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return input("ragged rows in matrix literal");
        }
        let n = rows.len();
        Ok(IntMatrix { rows: n, cols, data: rows.into_iter().flatten().collect() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return input(format!("cannot multiply {}x{} by {}x{}", self.rows, self.cols, other.rows, other.cols));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a * &other[(k, j)];
                    out[(i, j)] += prod;
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return input("shape mismatch in matrix subtraction");
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(IntMatrix { rows: self.rows, cols: self.cols, data })
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.rows != other.rows {
            return input("row count mismatch in hstack");
        }
        let mut out = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..other.cols {
                out[(i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        Ok(out)
    }

    /// Vertical concatenation.
    pub fn vstack(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.cols {
            return input("column count mismatch in vstack");
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(IntMatrix { rows: self.rows + other.rows, cols: self.cols, data })
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt> {
        if !self.is_square() {
            return input("determinant of a non-square matrix");
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.to_rows();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(p) => {
                        a.swap(k, p);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        Ok(sign * &a[n - 1][n - 1])
    }

    pub fn is_unimodular(&self) -> bool {
        self.determinant().map(|d| d.abs().is_one()).unwrap_or(false)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[target] += factor * row[source]
    fn add_row_multiple(&mut self, target: usize, source: usize, factor: &BigInt) {
        for j in 0..self.cols {
            let v = factor * &self[(source, j)];
            self[(target, j)] += v;
        }
    }

    /// col[target] += factor * col[source]
    fn add_col_multiple(&mut self, target: usize, source: usize, factor: &BigInt) {
        for i in 0..self.rows {
            let v = factor * &self[(i, source)];
            self[(i, target)] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

/// Smith normal form `U * A * V = D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// Diagonal entries of `D`, including trailing zeros.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d[(i, i)].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

/// Computes the Smith normal form of an integer matrix.
///
/// The diagonal is nonnegative and each nonzero entry divides the next.
pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let (rows, cols) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        // smallest nonzero entry of the trailing block becomes the pivot
        let Some((pi, pj)) = min_abs_entry(&d, t) else { break };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);

        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = -d[(i, t)].div_floor(&d[(t, t)]);
                d.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                dirty |= !d[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = -d[(t, j)].div_floor(&d[(t, t)]);
                d.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                dirty |= !d[(t, j)].is_zero();
            }
            if dirty {
                let (pi, pj) = min_abs_in_cross(&d, t);
                d.swap_rows(t, pi);
                u.swap_rows(t, pi);
                d.swap_cols(t, pj);
                v.swap_cols(t, pj);
                continue;
            }
            // divisibility: fold any offending row into the pivot row
            let pivot = d[(t, t)].clone();
            let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !d[(i, j)].is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    d.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    SmithForm { u, d, v }
}

fn min_abs_entry(m: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..m.rows() {
        for j in t..m.cols() {
            let x = &m[(i, j)];
            if x.is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| x.abs() < m[(bi, bj)].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

// pivot candidates restricted to row t and column t
fn min_abs_in_cross(m: &IntMatrix, t: usize) -> (usize, usize) {
    let mut best = (t, t);
    let better = |m: &IntMatrix, cand: (usize, usize), best: (usize, usize)| {
        let x = &m[cand];
        !x.is_zero() && (m[best].is_zero() || x.abs() < m[best].abs())
    };
    for i in t..m.rows() {
        if better(m, (i, t), best) {
            best = (i, t);
        }
    }
    for j in t..m.cols() {
        if better(m, (t, j), best) {
            best = (t, j);
        }
    }
    best
}

fn check_action_matrices(mats: &[IntMatrix]) -> Result<usize> {
    let Some(first) = mats.first() else {
        return input("at least one matrix is required");
    };
    let n = first.rows();
    for m in mats {
        if !m.is_square() || m.rows() != n {
            return input(format!("dimension mismatch: expected {n}x{n}, got {}x{}", m.rows(), m.cols()));
        }
        if !m.is_unimodular() {
            return input("action matrix is not invertible over the integers");
        }
    }
    Ok(n)
}

/// Basis (as columns) of the lattice vectors fixed by every matrix in `mats`.
///
/// The basis is saturated: the quotient of the lattice by its span is
/// torsion-free.
pub fn fixed_sublattice(mats: &[IntMatrix]) -> Result<IntMatrix> {
    let n = check_action_matrices(mats)?;
    let id = IntMatrix::identity(n);
    let mut stacked = IntMatrix::zeros(0, n);
    for m in mats {
        stacked = stacked.vstack(&m.sub(&id)?)?;
    }
    let snf = smith_normal_form(&stacked);
    let r = snf.rank();
    let mut basis = IntMatrix::zeros(n, n - r);
    for (out_j, j) in (r..n).enumerate() {
        for i in 0..n {
            basis[(i, out_j)] = snf.v[(i, j)].clone();
        }
    }
    Ok(basis)
}

/// The lattice spanned by all `(M - I) v`, as columns `[M1 - I | M2 - I | ...]`.
pub fn augmentation_image(mats: &[IntMatrix]) -> Result<IntMatrix> {
    let n = check_action_matrices(mats)?;
    let id = IntMatrix::identity(n);
    let mut out = IntMatrix::zeros(n, 0);
    for m in mats {
        out = out.hstack(&m.sub(&id)?)?;
    }
    Ok(out)
}

/// Elementary divisors greater than one of the coinvariant quotient
/// `Z^n / <(M - I) v>`.
pub fn coinvariant_torsion(mats: &[IntMatrix]) -> Result<Vec<BigInt>> {
    let image = augmentation_image(mats)?;
    let snf = smith_normal_form(&image);
    Ok(snf.diagonal().into_iter().filter(|d| *d > BigInt::one()).collect())
}

/// Solves `A x = b` over the rationals for square nonsingular `A`.
pub fn solve_rational(a: &[Vec<BigRational>], b: &[BigRational]) -> Result<Vec<BigRational>> {
    let n = a.len();
    if a.iter().any(|r| r.len() != n) || b.len() != n {
        return input("solve_rational expects a square system");
    }
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for col in 0..n {
        let Some(p) = (col..n).find(|&i| !m[i][col].is_zero()) else {
            return input("singular system");
        };
        m.swap(col, p);
        let pivot = m[col][col].clone();
        for x in m[col].iter_mut() {
            *x = &*x / &pivot;
        }
        for i in 0..n {
            if i == col || m[i][col].is_zero() {
                continue;
            }
            let f = m[i][col].clone();
            for j in col..=n {
                let v = &f * &m[col][j];
                m[i][j] -= v;
            }
        }
    }
    Ok(m.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

/// A partition: weakly decreasing positive parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return input("partition parts must be positive");
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition { parts })
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn weight(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Multiplicity of each part size, as `(size, count)` pairs.
    pub fn multiplicities(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &p in &self.parts {
            match out.last_mut() {
                Some((size, count)) if *size == p => *count += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// All partitions of `m`, in lexicographically decreasing order.
///
/// `partitions(2)` is `[(2), (1,1)]`; `partitions(0)` is `[()]`.
pub fn partitions(m: usize) -> Vec<Partition> {
    fn go(remaining: usize, max_part: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition { parts: prefix.clone() });
            return;
        }
        for p in (1..=max_part.min(remaining)).rev() {
            prefix.push(p);
            go(remaining - p, p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(m, m, &mut Vec::new(), &mut out);
    out
}

/// Writes `q = p^f` for a prime `p`, or `None` if `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..).take_while(|d| d * d <= q).find(|d| q.is_multiple_of(*d)).unwrap_or(q);
    let mut rest = q;
    let mut f = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        f += 1;
    }
    (rest == 1).then_some((p, f))
}

/// Order of a finite group split into its p-part and p'-part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupOrder {
    pub total: BigInt,
    pub p_prime_part: BigInt,
    pub p_part: BigInt,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClassicalKind {
    Symplectic,
    SpecialOrthogonal,
    Orthogonal,
}

/// Order of `Sp_dim(q)`, `SO_dim(q)` or `O_dim(q)`.
///
/// For even `dim` the `split` flag selects `SO^+` (split) or `SO^-`; it is
/// ignored in odd dimension. `O_dim = 2 * SO_dim` for `dim >= 1`.
pub fn classical_group_order(kind: ClassicalKind, dim: usize, q: u64, split: bool) -> Result<GroupOrder> {
    let Some((p, _)) = prime_power(q) else {
        return input(format!("q = {q} is not a prime power"));
    };
    if p == 2 {
        return input("q must be odd");
    }
    let qb = BigInt::from(q);
    let pow = |e: usize| num_traits::pow(qb.clone(), e);
    // prod_{i=1}^{k} (q^{2i} - 1)
    let sp_core = |k: usize| (1..=k).fold(BigInt::one(), |acc, i| acc * (pow(2 * i) - 1));

    let (p_part, mut p_prime) = match kind {
        ClassicalKind::Symplectic => {
            if dim % 2 == 1 {
                return input(format!("symplectic group in odd dimension {dim}"));
            }
            let k = dim / 2;
            (pow(k * k), sp_core(k))
        }
        ClassicalKind::SpecialOrthogonal | ClassicalKind::Orthogonal => {
            if dim % 2 == 1 {
                let k = dim / 2;
                (pow(k * k), sp_core(k))
            } else if dim == 0 {
                (BigInt::one(), BigInt::one())
            } else {
                let k = dim / 2;
                let sign_factor = if split { pow(k) - 1 } else { pow(k) + 1 };
                (pow(k * (k - 1)), sign_factor * sp_core(k - 1))
            }
        }
    };
    if kind == ClassicalKind::Orthogonal && dim >= 1 {
        p_prime *= 2;
    }
    Ok(GroupOrder { total: &p_part * &p_prime, p_prime_part: p_prime, p_part })
}
