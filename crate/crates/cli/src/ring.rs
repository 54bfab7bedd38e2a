//! The log canonical ring of the plane glued along a quartic.
//!
//! With `f = x^4 + y^4 + z^4` and `tau(x, y, z) = (-x, -y, z)`, sections of
//! degree `k` are the forms `f * g` with `deg g = k - 4` together with the
//! forms on the plane whose restriction to the quartic descends, namely
//! monomials `x^a y^b z^c` with `a + b = k (mod 2)`.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::CliError;

pub const MAX_RING_DEGREE: u32 = 64;

/// Degree of the relation `f`.
const F_DEGREE: u32 = 4;

/// Number of degree-`j` monomials in `x, y, z`; zero for negative `j`.
pub fn monomials(j: i64) -> u64 {
    if j < 0 {
        0
    } else {
        let j = j as u64;
        (j + 2) * (j + 1) / 2
    }
}

/// Degree-`j` monomials `x^a y^b z^c` with `a + b` of the given parity.
pub fn parity_monomials(j: i64, parity: u32) -> u64 {
    if j < 0 {
        return 0;
    }
    (0..=j as u64).filter(|s| s % 2 == parity as u64 % 2).map(|s| s + 1).sum()
}

/// `dim R_k = |S_{k-4}| + |S_k^+-| - |S_{k-4}^+-|`, parity taken from `k`.
pub fn ring_dim(k: u32) -> u64 {
    let (k, p) = (k as i64, k % 2);
    monomials(k - 4) + parity_monomials(k, p) - parity_monomials(k - 4, p)
}

pub fn graded_ring_dims(max_k: u32) -> Result<Vec<(u32, u64)>, CliError> {
    if max_k > MAX_RING_DEGREE {
        return Err(CliError::Argument(format!("max-k must be at most {MAX_RING_DEGREE}, got {max_k}")));
    }
    Ok((0..=max_k).map(|k| (k, ring_dim(k))).collect())
}

type Monomial = [u32; 3];
type Poly = BTreeMap<Monomial, BigRational>;

fn mul(p: &Poly, q: &Poly) -> Poly {
    let mut out = Poly::new();
    for (a, x) in p {
        for (b, y) in q {
            let m = [a[0] + b[0], a[1] + b[1], a[2] + b[2]];
            let e = out.entry(m).or_insert_with(BigRational::zero);
            *e += x * y;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn monomial(m: Monomial) -> Poly {
    Poly::from([(m, BigRational::one())])
}

fn degree_monomials(k: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for a in (0..=k).rev() {
        for b in (0..=k - a).rev() {
            out.push([a, b, k - a - b]);
        }
    }
    out
}

/// Candidate spanning set for `R_k`.
fn ring_spanning_set(k: u32) -> Vec<Poly> {
    let mut out: Vec<Poly> =
        degree_monomials(k).into_iter().filter(|m| (m[0] + m[1]) % 2 == k % 2).map(monomial).collect();
    if k >= F_DEGREE {
        let f: Poly = [[4, 0, 0], [0, 4, 0], [0, 0, 4]].into_iter().map(|m| (m, BigRational::one())).collect();
        out.extend(degree_monomials(k - F_DEGREE).into_iter().map(|m| mul(&f, &monomial(m))));
    }
    out
}

/// Row echelon form over the rationals, grown one vector at a time.
#[derive(Default)]
struct Echelon {
    rows: Vec<(Monomial, Poly)>,
}

impl Echelon {
    /// Adds `v` to the span; returns whether it was independent.
    fn insert(&mut self, v: &Poly) -> bool {
        let mut v = v.clone();
        for (pivot, row) in &self.rows {
            if let Some(c) = v.get(pivot).cloned() {
                for (m, x) in row {
                    let e = v.entry(*m).or_insert_with(BigRational::zero);
                    *e -= &c * x;
                }
                v.retain(|_, c| !c.is_zero());
            }
        }
        let Some((&pivot, lead)) = v.iter().next() else { return false };
        let lead = lead.clone();
        for x in v.values_mut() {
            *x /= &lead;
        }
        self.rows.push((pivot, v));
        true
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }
}

/// Minimal generators of the ring up to `max_degree`, as
/// `(degree, generator)` pairs in increasing degree.
pub fn ring_generators(max_degree: u32) -> Vec<(u32, String)> {
    let mut bases: Vec<Vec<Poly>> = vec![vec![monomial([0, 0, 0])]];
    let mut gens: Vec<(u32, Poly)> = Vec::new();
    for k in 1..=max_degree {
        let mut basis = Echelon::default();
        let mut kept = Vec::new();
        for p in ring_spanning_set(k) {
            if basis.insert(&p) {
                kept.push(p);
            }
        }
        let mut span = Echelon::default();
        for (d, g) in &gens {
            for r in &bases[(k - d) as usize] {
                span.insert(&mul(g, r));
            }
        }
        for p in &kept {
            if span.insert(p) {
                gens.push((k, p.clone()));
            }
        }
        debug_assert_eq!(basis.rank() as u64, ring_dim(k));
        bases.push(kept);
    }
    gens.into_iter().map(|(d, p)| (d, format_poly(&p))).collect()
}

pub fn format_poly(p: &Poly) -> String {
    let names = ["x", "y", "z"];
    let mut terms = Vec::new();
    for (m, c) in p.iter().rev() {
        let mono: Vec<String> = m
            .iter()
            .zip(names)
            .filter(|(e, _)| **e > 0)
            .map(|(e, n)| if *e == 1 { n.to_string() } else { format!("{n}^{e}") })
            .collect();
        let mono = if mono.is_empty() { "1".to_string() } else { mono.join("*") };
        let coeff = if c.is_one() {
            String::new()
        } else if c.is_integer() {
            format!("{}*", c.to_integer())
        } else {
            format!("({c})*")
        };
        terms.push(format!("{coeff}{mono}"));
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

/// Degrees at which generators appear, e.g. `[1, 1, 2, 5]`.
pub fn generator_degrees(max_degree: u32) -> Vec<u32> {
    ring_generators(max_degree).into_iter().map(|(d, _)| d).collect()
}
