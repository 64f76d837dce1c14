//! The vertex of the building fixed by an anisotropic torus, and the
//! reductive quotient of its parahoric.
//!
//! On a factor `V_{2r,κ}` the form is `Tr(κ/π_L · x ȳ)`, so the dual of
//! `π_E^b O` is `π_E^{-b-e} O` with form valuation `e = v_L(κ) - 1`. On the
//! `U_1` line the form is `κ_j x ȳ` with `κ_j = π_K u^c`, which gives form
//! valuation `0` in the same normalization. A lattice `∏ π_E^{b_i} O_i` is
//! a vertex exactly when each gap `-e_i - 2b_i` is `0` or `1`; the factors
//! with gap `1` carry an alternating form on the reduction and the others
//! a symmetric one.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use crate::error::{input, Error, Result};
use crate::hermitian::{is_quasi_split_embedding, EmbeddingChoice};
use crate::tori::ElementalDecomposition;

/// Exponents `b_i` of the lattice `∏ π_E^{b_i} O_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexLattice {
    pub b: Vec<i64>,
}

/// Form valuations of the factors, using `v_L(κ_i) = ν_i ∈ {0, 1}` as
/// representatives.
pub fn form_valuations(dec: &ElementalDecomposition, choice: &EmbeddingChoice) -> Result<Vec<i64>> {
    choice.check(dec)?;
    let mut parity = choice.parity.iter();
    Ok(dec
        .factors
        .iter()
        .map(|f| if f.is_u1() { 0 } else { *parity.next().expect("checked shape") as i64 - 1 })
        .collect())
}

fn gap(e: i64, b: i64) -> i64 {
    -e - 2 * b
}

fn admissible(e: i64, b: i64) -> bool {
    matches!(gap(e, b), 0 | 1)
}

/// The unique admissible exponent vector for the given form valuations.
pub fn fixed_vertex_for_valuations(valuations: &[i64]) -> VertexLattice {
    VertexLattice { b: valuations.iter().map(|&e| (-e).div_euclid(2)).collect() }
}

/// The vertex fixed by `T(K)` for this embedding.
pub fn fixed_vertex(dec: &ElementalDecomposition, choice: &EmbeddingChoice) -> Result<VertexLattice> {
    Ok(fixed_vertex_for_valuations(&form_valuations(dec, choice)?))
}

/// Every admissible `b` in `[-window, window]^j`; a test oracle.
pub fn brute_force_for_valuations(valuations: &[i64], window: i64) -> Vec<VertexLattice> {
    let mut out = vec![Vec::new()];
    for &e in valuations {
        let options: Vec<i64> = (-window..=window).filter(|&b| admissible(e, b)).collect();
        out = out
            .into_iter()
            .flat_map(|prefix| {
                options.iter().map(move |&b| {
                    let mut next = prefix.clone();
                    next.push(b);
                    next
                })
            })
            .collect();
    }
    out.into_iter().map(|b| VertexLattice { b }).collect()
}

pub fn brute_force_fixed_lattices(
    dec: &ElementalDecomposition,
    choice: &EmbeddingChoice,
    window: i64,
) -> Result<Vec<VertexLattice>> {
    Ok(brute_force_for_valuations(&form_valuations(dec, choice)?, window))
}

/// `Sp_l(k) × O_{m_red}(k)`, the reductive quotient at a vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ReductionType {
    pub l: usize,
    pub m_red: usize,
    /// Split (`O`) or non-split (`O'`) orthogonal factor; `true` when
    /// `m_red` is odd or zero.
    pub orth_split: bool,
    /// Order of the component group of the reduction.
    pub stab_component_order: u32,
}

impl ReductionType {
    pub fn new(l: usize, m_red: usize, orth_split: bool) -> Self {
        let orth_split = orth_split || m_red % 2 == 1 || m_red == 0;
        ReductionType { l, m_red, orth_split, stab_component_order: if m_red == 0 { 1 } else { 2 } }
    }

    pub fn n(&self) -> usize {
        self.l + self.m_red
    }
}

impl fmt::Display for ReductionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prime = if self.orth_split { "" } else { "'" };
        match (self.l, self.m_red) {
            (0, 0) => write!(f, "1"),
            (l, 0) => write!(f, "Sp{l}"),
            (0, m) => write!(f, "O{m}{prime}"),
            (l, m) => write!(f, "Sp{l} x O{m}{prime}"),
        }
    }
}

/// Reduction type at the vertex fixed by the embedded torus.
pub fn reduction_type(dec: &ElementalDecomposition, choice: &EmbeddingChoice, n: usize) -> Result<ReductionType> {
    if dec.n != n {
        return input(format!("decomposition is for n = {}, not {n}", dec.n));
    }
    let vals = form_valuations(dec, choice)?;
    let vertex = fixed_vertex_for_valuations(&vals);
    let l = dec
        .factors
        .iter()
        .zip(vals.iter().zip(&vertex.b))
        .filter(|(_, (&e, &b))| gap(e, b) == 1)
        .map(|(f, _)| f.s)
        .sum::<usize>();
    Ok(ReductionType::new(l, n - l, is_quasi_split_embedding(choice, n)))
}

/// Whether the center of the reduction lies in its identity component.
pub fn center_in_identity(n: usize) -> bool {
    n.is_multiple_of(2)
}

const BUILTIN_FIXTURE: &str = include_str!("../fixtures/appendix_ramified.txt");

/// File name of the reduction table inside a fixture directory.
pub const FIXTURE_FILE: &str = "appendix_ramified.txt";

/// Vertex reductions for ramified unitary groups, keyed by
/// `(n, quasi_split)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AppendixTable {
    rows: BTreeMap<(usize, bool), Vec<ReductionType>>,
}

impl AppendixTable {
    /// The table shipped with the crate.
    pub fn builtin() -> Self {
        Self::parse(BUILTIN_FIXTURE).expect("bundled fixture is well formed")
    }

    pub fn load(dir: &Path) -> Result<Self> {
        let path = dir.join(FIXTURE_FILE);
        let text =
            std::fs::read_to_string(&path).map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Parses `n form l m_red orth_split` records; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut rows: BTreeMap<(usize, bool), Vec<ReductionType>> = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |what: &str| Error::Input(format!("fixture line {}: {what}: {raw:?}", lineno + 1));
            let fields: Vec<&str> = line.split_whitespace().collect();
            let [n, form, l, m_red, split] = fields[..] else {
                return Err(bad("expected 5 fields"));
            };
            let num = |s: &str| s.parse::<usize>().map_err(|_| bad("bad integer"));
            let (n, l, m_red) = (num(n)?, num(l)?, num(m_red)?);
            let qs = match form {
                "qs" => true,
                "nqs" => false,
                _ => return Err(bad("form must be qs or nqs")),
            };
            let orth_split = match split {
                "1" => true,
                "0" => false,
                _ => return Err(bad("orth_split must be 0 or 1")),
            };
            if l + m_red != n || l % 2 == 1 {
                return Err(bad("inconsistent dimensions"));
            }
            rows.entry((n, qs)).or_default().push(ReductionType::new(l, m_red, orth_split));
        }
        if rows.is_empty() {
            return input("fixture contains no records");
        }
        Ok(AppendixTable { rows })
    }

    pub fn get(&self, n: usize, quasi_split: bool) -> Result<&[ReductionType]> {
        if n % 2 == 1 && !quasi_split {
            return input(format!("odd n = {n} has no non-quasi-split unitary group"));
        }
        self.rows.get(&(n, quasi_split)).map(Vec::as_slice).ok_or_else(|| Error::Input(format!("no table for n = {n}")))
    }

    pub fn max_n(&self) -> usize {
        self.rows.keys().map(|k| k.0).max().unwrap_or(0)
    }

    pub fn contains(&self, n: usize, quasi_split: bool, red: &ReductionType) -> bool {
        self.get(n, quasi_split).map(|rows| rows.contains(red)).unwrap_or(false)
    }
}

/// Vertex reductions of the ramified unitary group of dimension `n`.
pub fn appendix_table(n: usize, quasi_split: bool) -> Result<Vec<ReductionType>> {
    AppendixTable::builtin().get(n, quasi_split).map(<[_]>::to_vec)
}
