//! Minimal integral cycles on negative-definite graphs.
//!
//! All three cycles are computed by the same increment iteration. Starting
//! from a seed `a`, keep `p = M a + b` (with `b` the boundary or strict
//! transform contribution) and, while some `p_i > 0`, raise the lowest such
//! `a_i` by one. Every step stays below any integral solution that dominates
//! the seed, so the limit is the minimal one.

use std::collections::BTreeMap;
use std::fmt;

use indexmap::IndexMap;
use num_bigint::BigInt;

use crate::divisor::{QDivisor, Rational};
use crate::error::{Error, Result};
use crate::graph::ExceptionalGraph;

/// Largest coefficient the iteration may reach before giving up.
pub const COEFFICIENT_CAP: u64 = 1_000_000;

/// A non-negative integral combination of the vertices of a graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeCycle {
    coefficients: IndexMap<String, u64>,
}

impl LatticeCycle {
    pub fn zero(g: &ExceptionalGraph) -> Self {
        Self { coefficients: g.ids().map(|id| (id.to_string(), 0)).collect() }
    }

    fn from_vec(g: &ExceptionalGraph, a: &[u64]) -> Self {
        Self { coefficients: g.ids().map(str::to_string).zip(a.iter().copied()).collect() }
    }

    pub fn coefficient(&self, id: &str) -> u64 {
        self.coefficients.get(id).copied().unwrap_or(0)
    }

    /// Coefficients in graph vertex order.
    pub fn coefficients(&self) -> Vec<u64> {
        self.coefficients.values().copied().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.coefficients.iter().map(|(k, &v)| (k.as_str(), v))
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.values().all(|&c| c == 0)
    }

    pub fn to_divisor(&self) -> QDivisor {
        QDivisor::from_terms(self.iter().map(|(id, c)| (id, Rational::from_integer(BigInt::from(c)))))
    }

    /// Comma-separated coefficients in vertex order, e.g. `2,1,1,1`.
    pub fn coefficient_list(&self) -> String {
        self.coefficients().iter().map(u64::to_string).collect::<Vec<_>>().join(",")
    }

    /// `(Z + B) . E_i` for every vertex, with `B . E_i = offset[i]`.
    pub fn products(&self, g: &ExceptionalGraph, offset: &[i64]) -> Vec<i64> {
        let m = g.intersection_matrix();
        let a = self.coefficients();
        (0..g.len())
            .map(|i| offset[i] + (0..g.len()).map(|j| m[i][j] * a[j] as i64).sum::<i64>())
            .collect()
    }
}

impl fmt::Display for LatticeCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .iter()
            .filter(|&(_, c)| c > 0)
            .map(|(id, c)| if c == 1 { id.to_string() } else { format!("{c}{id}") })
            .collect();
        if terms.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&terms.join(" + "))
        }
    }
}

/// Runs the increment iteration from `seed` against the offsets `b`.
fn iterate(g: &ExceptionalGraph, seed: Vec<u64>, b: &[i64]) -> Result<LatticeCycle> {
    let m = g.intersection_matrix();
    let n = g.len();
    let mut a = seed;
    let mut p: Vec<i64> = (0..n)
        .map(|i| b[i] + (0..n).map(|j| m[i][j] * a[j] as i64).sum::<i64>())
        .collect();
    while let Some(i) = p.iter().position(|&x| x > 0) {
        a[i] += 1;
        if a[i] > COEFFICIENT_CAP {
            return Err(Error::NonTermination { cap: COEFFICIENT_CAP });
        }
        for (j, pj) in p.iter_mut().enumerate() {
            *pj += m[j][i];
        }
    }
    let z = LatticeCycle::from_vec(g, &a);
    debug_assert!(z.products(g, b).iter().all(|&x| x <= 0));
    Ok(z)
}

fn require_definite_connected(g: &ExceptionalGraph) -> Result<()> {
    if !g.is_negative_definite() {
        return Err(Error::NotNegativeDefinite);
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    Ok(())
}

fn first_vertex_seed(n: usize) -> Vec<u64> {
    let mut seed = vec![0; n];
    if n > 0 {
        seed[0] = 1;
    }
    seed
}

/// Minimal nonzero integral `Z` with `(Z + D) . E_i <= 0` for every vertex,
/// where `D . E_i` counts the boundary marks on `E_i`.
pub fn semi_numerical_cycle(g: &ExceptionalGraph) -> Result<LatticeCycle> {
    require_definite_connected(g)?;
    let b: Vec<i64> = g.marks().iter().map(|&m| m as i64).collect();
    let seed = if b.iter().any(|&x| x > 0) { vec![0; g.len()] } else { first_vertex_seed(g.len()) };
    iterate(g, seed, &b)
}

/// Minimal nonzero effective `Z` with `Z . E_i <= 0`; the graph must carry no
/// boundary marks.
pub fn fundamental_cycle(g: &ExceptionalGraph) -> Result<LatticeCycle> {
    require_definite_connected(g)?;
    if g.total_marks() > 0 {
        return Err(Error::BoundaryMarksPresent);
    }
    iterate(g, first_vertex_seed(g.len()), &vec![0; g.len()])
}

/// Minimal effective integral `G` with `(B + G) . E_i <= 0` for every vertex,
/// where `B . E_i` is the strict transform incidence.
pub fn hat_transform(g: &ExceptionalGraph, incidence: &BTreeMap<String, u64>) -> Result<LatticeCycle> {
    if !g.is_negative_definite() {
        return Err(Error::NotNegativeDefinite);
    }
    let mut b = vec![0i64; g.len()];
    for (id, &c) in incidence {
        b[g.position(id)?] = i64::try_from(c).map_err(|_| Error::InvalidArgument(format!("incidence at `{id}` too large")))?;
    }
    iterate(g, vec![0; g.len()], &b)
}
