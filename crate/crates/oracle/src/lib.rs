//! Slow, independent reference computations for tests.
//!
//! Nothing here shares code with the library crates: inputs are plain
//! integer matrices and tuples, and every routine takes the most direct
//! route (enumeration, recursion, cofactor expansion) rather than the
//! efficient one.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Determinant of the tridiagonal matrix with diagonal `d` and all
/// off-diagonal entries 1, by the three-term recursion.
pub fn tridiagonal_det(d: &[i64]) -> BigInt {
    let (mut prev, mut cur) = (BigInt::one(), BigInt::zero());
    for (k, &x) in d.iter().enumerate() {
        let next = if k == 0 { BigInt::from(x) } else { BigInt::from(x) * &cur - &prev };
        if k > 0 {
            prev = cur;
        }
        cur = next;
    }
    if d.is_empty() {
        BigInt::one()
    } else {
        cur
    }
}

/// Determinant by Laplace expansion along the first row.
pub fn cofactor_det(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    if n == 1 {
        return BigInt::from(m[0][0]);
    }
    let mut total = BigInt::zero();
    for j in 0..n {
        if m[0][j] == 0 {
            continue;
        }
        let minor: Vec<Vec<i64>> =
            m[1..].iter().map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect()).collect();
        let term = BigInt::from(m[0][j]) * cofactor_det(&minor);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

/// Characteristic polynomial `det(tI - M)`, coefficients from the constant
/// term upwards, via Faddeev-LeVerrier over the rationals.
pub fn char_poly(m: &[Vec<i64>]) -> Vec<Q> {
    let n = m.len();
    let a: Vec<Vec<Q>> = m.iter().map(|r| r.iter().map(|&x| qi(x)).collect()).collect();
    let mut coeffs = vec![Q::zero(); n + 1];
    coeffs[n] = Q::one();
    let mut mk: Vec<Vec<Q>> = vec![vec![Q::zero(); n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = vec![vec![Q::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = Q::zero();
                for l in 0..n {
                    s += &a[i][l] * &mk[l][j];
                }
                if i == j {
                    s += &coeffs[n - k + 1];
                }
                next[i][j] = s;
            }
        }
        mk = next;
        let mut tr = Q::zero();
        for i in 0..n {
            for l in 0..n {
                tr += &a[i][l] * &mk[l][i];
            }
        }
        coeffs[n - k] = -tr / qi(k as i64);
    }
    coeffs
}

fn poly_eval(p: &[Q], x: &Q) -> Q {
    p.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
}

fn poly_trim(mut p: Vec<Q>) -> Vec<Q> {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_rem(a: &[Q], b: &[Q]) -> Vec<Q> {
    let mut r = poly_trim(a.to_vec());
    let b = poly_trim(b.to_vec());
    let db = b.len() - 1;
    while r.len() > db && !(r.len() == 1 && r[0].is_zero()) {
        let shift = r.len() - 1 - db;
        let factor = r.last().unwrap() / b.last().unwrap();
        for (i, c) in b.iter().enumerate() {
            r[i + shift] -= &factor * c;
        }
        r = poly_trim(r);
        if r.len() - 1 < db {
            break;
        }
    }
    r
}

fn derivative(p: &[Q]) -> Vec<Q> {
    if p.len() <= 1 {
        return vec![Q::zero()];
    }
    p.iter().enumerate().skip(1).map(|(i, c)| c * qi(i as i64)).collect()
}

fn sign_changes(values: &[Q]) -> usize {
    let signs: Vec<bool> = values.iter().filter(|v| !v.is_zero()).map(Signed::is_positive).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Number of distinct real roots of `p` in `(lo, hi]` by Sturm's theorem.
pub fn sturm_count(p: &[Q], lo: &Q, hi: &Q) -> usize {
    let p = poly_trim(p.to_vec());
    let mut seq = vec![p.clone(), derivative(&p)];
    loop {
        let n = seq.len();
        let r = poly_rem(&seq[n - 2], &seq[n - 1]);
        if r.iter().all(Zero::is_zero) {
            break;
        }
        seq.push(r.into_iter().map(|c| -c).collect());
    }
    let at = |x: &Q| sign_changes(&seq.iter().map(|s| poly_eval(s, x)).collect::<Vec<_>>());
    at(lo) - at(hi)
}

/// A symmetric matrix is negative definite iff all eigenvalues are negative,
/// i.e. its characteristic polynomial has no root in `[0, R]` for a bound
/// `R` on the spectral radius. Multiple roots do not matter: a repeated
/// non-negative eigenvalue is still a root in that interval.
pub fn negative_definite_by_sturm(m: &[Vec<i64>]) -> bool {
    if m.is_empty() {
        return true;
    }
    let p = char_poly(m);
    if p[0].is_zero() {
        return false;
    }
    let radius: i64 = m.iter().map(|r| r.iter().map(|x| x.abs()).sum::<i64>()).max().unwrap_or(0) + 1;
    // Roots in (-1/2, R]; zero is excluded above and an eigenvalue in (-1/2, 0)
    // would be caught too, which only matters for the sign test below.
    let nonneg = sturm_count(&p, &Q::zero(), &qi(radius));
    nonneg == 0
}

/// Exact solution of a 2x2 system by Cramer's rule.
pub fn solve2(m: [[i64; 2]; 2], rhs: [Q; 2]) -> Option<[Q; 2]> {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if det == 0 {
        return None;
    }
    let d = qi(det);
    let x = (&rhs[0] * qi(m[1][1]) - &rhs[1] * qi(m[0][1])) / &d;
    let y = (&rhs[1] * qi(m[0][0]) - &rhs[0] * qi(m[1][0])) / &d;
    Some([x, y])
}

/// Minimal vector (under the componentwise order, reached as the unique
/// minimum of the coefficient sum) among `a` in `[0, bound]^n`, `a != 0`
/// when `nonzero`, with `M a + offset <= 0`. Enumerates every candidate.
pub fn brute_force_min_cycle(m: &[Vec<i64>], offset: &[i64], bound: u64, nonzero: bool) -> Option<Vec<u64>> {
    let n = m.len();
    let mut best: Option<Vec<u64>> = None;
    let mut a = vec![0u64; n];
    loop {
        let valid = (!nonzero || a.iter().any(|&x| x > 0))
            && (0..n).all(|i| offset[i] + (0..n).map(|j| m[i][j] * a[j] as i64).sum::<i64>() <= 0);
        if valid {
            let better = match &best {
                None => true,
                Some(b) => a.iter().sum::<u64>() < b.iter().sum::<u64>(),
            };
            if better {
                best = Some(a.clone());
            }
        }
        let mut k = 0;
        loop {
            if k == n {
                return best;
            }
            if a[k] < bound {
                a[k] += 1;
                break;
            }
            a[k] = 0;
            k += 1;
        }
    }
}

/// Every valid vector found by the same enumeration; used to check that the
/// minimum is below all of them componentwise.
pub fn all_valid_cycles(m: &[Vec<i64>], offset: &[i64], bound: u64, nonzero: bool) -> Vec<Vec<u64>> {
    let n = m.len();
    let mut out = Vec::new();
    let mut a = vec![0u64; n];
    loop {
        let valid = (!nonzero || a.iter().any(|&x| x > 0))
            && (0..n).all(|i| offset[i] + (0..n).map(|j| m[i][j] * a[j] as i64).sum::<i64>() <= 0);
        if valid {
            out.push(a.clone());
        }
        let mut k = 0;
        loop {
            if k == n {
                return out;
            }
            if a[k] < bound {
                a[k] += 1;
                break;
            }
            a[k] = 0;
            k += 1;
        }
    }
}

/// A small weighted graph as plain data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlainGraph {
    pub self_intersections: Vec<i64>,
    pub edges: Vec<(usize, usize)>,
    pub marks: Vec<u32>,
}

impl PlainGraph {
    pub fn matrix(&self) -> Vec<Vec<i64>> {
        let n = self.self_intersections.len();
        let mut m = vec![vec![0; n]; n];
        for (i, &s) in self.self_intersections.iter().enumerate() {
            m[i][i] = s;
        }
        for &(a, b) in &self.edges {
            m[a][b] += 1;
            m[b][a] += 1;
        }
        m
    }

    pub fn is_connected(&self) -> bool {
        let n = self.self_intersections.len();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        if n == 0 {
            return true;
        }
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(a, b) in &self.edges {
                for (x, y) in [(a, b), (b, a)] {
                    if x == v && !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// Deterministic corpus of connected trees-plus-cycles on up to
/// `max_vertices` vertices, self-intersections in `[lo, -1]`, marks in
/// `0..=max_marks`, filtered to negative definite graphs by the Sturm test.
pub fn graph_corpus(max_vertices: usize, lo: i64, max_marks: u32, target: usize, seed: u64) -> Vec<PlainGraph> {
    let mut state = seed | 1;
    let mut next = move |k: u64| {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state % k
    };
    let mut out = Vec::new();
    let mut attempts = 0;
    while out.len() < target && attempts < target * 200 {
        attempts += 1;
        let n = 1 + next(max_vertices as u64) as usize;
        let selfs: Vec<i64> = (0..n).map(|_| lo + next((-lo) as u64) as i64).collect();
        let mut edges: Vec<(usize, usize)> = (1..n).map(|i| (next(i as u64) as usize, i)).collect();
        if n >= 3 && next(4) == 0 {
            let a = next(n as u64) as usize;
            let b = next(n as u64) as usize;
            if a != b {
                edges.push((a.min(b), a.max(b)));
            }
        }
        let marks: Vec<u32> = (0..n).map(|_| if next(3) == 0 { next(max_marks as u64 + 1) as u32 } else { 0 }).collect();
        let g = PlainGraph { self_intersections: selfs, edges, marks };
        if g.is_connected() && negative_definite_by_sturm(&g.matrix()) && !out.contains(&g) {
            out.push(g);
        }
    }
    out
}

/// Number of monomials `x^a y^b z^c` of degree `j` with `a + b` of the
/// given parity, by direct enumeration.
pub fn parity_monomials(j: i64, parity: u32) -> u64 {
    if j < 0 {
        return 0;
    }
    let mut count = 0;
    for a in 0..=j {
        for b in 0..=(j - a) {
            if ((a + b) as u32) % 2 == parity % 2 {
                count += 1;
            }
        }
    }
    count
}

/// Number of monomials of weighted degree `k` for the given weights.
pub fn weighted_monomials(weights: &[u64], k: u64) -> u64 {
    fn go(w: &[u64], k: u64) -> u64 {
        match w.split_first() {
            None => u64::from(k == 0),
            Some((&first, rest)) => (0..=k / first).map(|e| go(rest, k - e * first)).sum(),
        }
    }
    go(weights, k)
}

/// Hilbert function of a hypersurface of degree `d` in weighted projective
/// space with the given weights.
pub fn weighted_hypersurface_hilbert(weights: &[u64], d: u64, k: u64) -> u64 {
    let shifted = if k >= d { weighted_monomials(weights, k - d) } else { 0 };
    weighted_monomials(weights, k) - shifted
}
