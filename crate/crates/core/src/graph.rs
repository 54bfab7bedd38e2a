//! Weighted dual graphs of exceptional curves.
//!
//! A vertex is an exceptional curve with its self-intersection and genus.
//! Edges carry multiplicities (the number of intersection points). A vertex
//! may additionally carry boundary marks: branches of the conductor meeting
//! the curve, each contributing `+1` to `D . E`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::divisor::{QDivisor, Rational};
use crate::error::{Error, Result};
use crate::linalg::Matrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub id: String,
    pub self_intersection: i64,
    pub genus: u32,
}

/// Shape classes recognised by [`ExceptionalGraph::classify`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GraphType {
    /// Chain with a single boundary branch at one end.
    C1,
    /// Chain with one boundary branch at each end.
    C2,
    /// Chain with a boundary branch at one end and a fork of two
    /// (-2)-curves at the other.
    Dh,
    /// No boundary marks.
    LcNormal,
    /// C2 components glued cyclically; only assigned at the surface level.
    CycleDegenerateCusp,
    Unclassified,
}

impl GraphType {
    pub fn as_str(self) -> &'static str {
        match self {
            GraphType::C1 => "C1",
            GraphType::C2 => "C2",
            GraphType::Dh => "Dh",
            GraphType::LcNormal => "LC_NORMAL",
            GraphType::CycleDegenerateCusp => "CYCLE_DEGENERATE_CUSP",
            GraphType::Unclassified => "UNCLASSIFIED",
        }
    }
}

impl fmt::Display for GraphType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExceptionalGraph {
    vertices: Vec<Vertex>,
    index: HashMap<String, usize>,
    /// Multiplicity between vertex pairs `(i, j)` with `i < j`.
    edges: BTreeMap<(usize, usize), u32>,
    marks: Vec<u32>,
    /// Optional labels on boundary edges, keyed by vertex.
    labels: BTreeMap<usize, Rational>,
}

#[derive(Clone, Debug, Default)]
pub struct GraphBuilder {
    vertices: Vec<Vertex>,
    edges: Vec<(String, String)>,
    marks: Vec<(String, u32)>,
    labels: Vec<(String, Rational)>,
}

impl GraphBuilder {
    pub fn vertex(self, id: impl Into<String>, self_intersection: i64) -> Self {
        self.vertex_with_genus(id, self_intersection, 0)
    }

    pub fn vertex_with_genus(mut self, id: impl Into<String>, self_intersection: i64, genus: u32) -> Self {
        self.vertices.push(Vertex { id: id.into(), self_intersection, genus });
        self
    }

    /// Adds one intersection point between `a` and `b`; repeat for multiplicity.
    pub fn edge(mut self, a: impl Into<String>, b: impl Into<String>) -> Self {
        self.edges.push((a.into(), b.into()));
        self
    }

    pub fn mark(self, id: impl Into<String>) -> Self {
        self.marks(id, 1)
    }

    pub fn marks(mut self, id: impl Into<String>, count: u32) -> Self {
        self.marks.push((id.into(), count));
        self
    }

    pub fn label(mut self, id: impl Into<String>, value: Rational) -> Self {
        self.labels.push((id.into(), value));
        self
    }

    pub fn build(self) -> Result<ExceptionalGraph> {
        let mut index = HashMap::new();
        for (i, v) in self.vertices.iter().enumerate() {
            if v.self_intersection > -1 {
                return Err(Error::InvalidGraph(format!(
                    "vertex `{}` has self-intersection {} > -1",
                    v.id, v.self_intersection
                )));
            }
            if index.insert(v.id.clone(), i).is_some() {
                return Err(Error::InvalidGraph(format!("duplicate vertex `{}`", v.id)));
            }
        }
        let lookup = |id: &str| index.get(id).copied().ok_or_else(|| Error::UnknownVertex(id.to_string()));
        let mut edges = BTreeMap::new();
        for (a, b) in &self.edges {
            let (i, j) = (lookup(a)?, lookup(b)?);
            if i == j {
                return Err(Error::InvalidGraph(format!("loop at `{a}`")));
            }
            *edges.entry((i.min(j), i.max(j))).or_insert(0) += 1;
        }
        let mut marks = vec![0; self.vertices.len()];
        for (id, c) in &self.marks {
            marks[lookup(id)?] += c;
        }
        let mut labels = BTreeMap::new();
        for (id, value) in self.labels {
            let i = lookup(&id)?;
            if marks[i] == 0 {
                return Err(Error::InvalidGraph(format!("label on unmarked vertex `{id}`")));
            }
            labels.insert(i, value);
        }
        Ok(ExceptionalGraph { vertices: self.vertices, index, edges, marks, labels })
    }
}

impl ExceptionalGraph {
    pub fn builder() -> GraphBuilder {
        GraphBuilder::default()
    }

    pub fn empty() -> Self {
        GraphBuilder::default().build().expect("empty graph")
    }

    /// Chain `E1 - E2 - ... - En` with the given self-intersections.
    pub fn chain(self_intersections: &[i64]) -> Result<Self> {
        chain_builder(self_intersections).build()
    }

    /// The A_n configuration: a chain of `n` (-2)-curves.
    pub fn a_n(n: usize) -> Self {
        Self::chain(&vec![-2; n]).expect("valid chain")
    }

    /// The D_n configuration (n >= 4): centre `E1` first, then the two short
    /// arms `E2`, `E3`, then the long arm `E4..En`.
    pub fn d_n(n: usize) -> Self {
        assert!(n >= 4);
        let mut b = GraphBuilder::default();
        for i in 1..=n {
            b = b.vertex(format!("E{i}"), -2);
        }
        b = b.edge("E1", "E2").edge("E1", "E3").edge("E1", "E4");
        for i in 4..n {
            b = b.edge(format!("E{i}"), format!("E{}", i + 1));
        }
        b.build().expect("valid D_n")
    }

    /// Type C1: a boundary branch attached to the first curve of a chain.
    pub fn c1(self_intersections: &[i64]) -> Result<Self> {
        chain_builder(self_intersections).mark("E1").build()
    }

    /// Type C2: boundary branches attached to both ends of a chain.
    pub fn c2(self_intersections: &[i64]) -> Result<Self> {
        let n = self_intersections.len();
        chain_builder(self_intersections).mark("E1").mark(format!("E{n}")).build()
    }

    /// Type Dh: chain `E1..En` marked at `E1`, with two (-2)-curves `F1`, `F2`
    /// attached to `En`.
    pub fn dh(self_intersections: &[i64]) -> Result<Self> {
        let n = self_intersections.len();
        chain_builder(self_intersections)
            .mark("E1")
            .vertex("F1", -2)
            .vertex("F2", -2)
            .edge(format!("E{n}"), "F1")
            .edge(format!("E{n}"), "F2")
            .build()
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.vertices.iter().map(|v| v.id.as_str())
    }

    pub fn position(&self, id: &str) -> Result<usize> {
        self.index.get(id).copied().ok_or_else(|| Error::UnknownVertex(id.to_string()))
    }

    /// Boundary marks per vertex, in vertex order.
    pub fn marks(&self) -> &[u32] {
        &self.marks
    }

    pub fn total_marks(&self) -> u32 {
        self.marks.iter().sum()
    }

    pub fn multiplicity(&self, i: usize, j: usize) -> u32 {
        self.edges.get(&(i.min(j), i.max(j))).copied().unwrap_or(0)
    }

    /// Edges as `(i, j, multiplicity)` with `i < j`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        self.edges.iter().map(|(&(i, j), &m)| (i, j, m))
    }

    pub fn label(&self, id: &str) -> Result<Option<&Rational>> {
        Ok(self.labels.get(&self.position(id)?))
    }

    pub fn neighbours(&self, i: usize) -> Vec<usize> {
        self.edges
            .keys()
            .filter_map(|&(a, b)| if a == i { Some(b) } else if b == i { Some(a) } else { None })
            .collect()
    }

    /// Number of intersection points with other exceptional curves.
    pub fn degree(&self, i: usize) -> u32 {
        self.edges.iter().filter(|((a, b), _)| *a == i || *b == i).map(|(_, m)| *m).sum()
    }

    pub fn is_connected(&self) -> bool {
        let n = self.len();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for w in self.neighbours(v) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// `M[i][i]` is the self-intersection, `M[i][j]` the edge multiplicity.
    pub fn intersection_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.len();
        let mut m = vec![vec![0i64; n]; n];
        for (i, v) in self.vertices.iter().enumerate() {
            m[i][i] = v.self_intersection;
        }
        for (i, j, mult) in self.edges() {
            m[i][j] = mult as i64;
            m[j][i] = mult as i64;
        }
        m
    }

    pub fn matrix(&self) -> Matrix {
        Matrix::from_ints(&self.intersection_matrix())
    }

    pub fn is_negative_definite(&self) -> bool {
        self.matrix().is_negative_definite()
    }

    fn require_definite(&self) -> Result<Matrix> {
        let m = self.matrix();
        if m.is_negative_definite() {
            Ok(m)
        } else {
            Err(Error::NotNegativeDefinite)
        }
    }

    /// `|det M|`, the order of the discriminant group of the lattice.
    pub fn determinant(&self) -> Result<BigInt> {
        let m = self.require_definite()?;
        Ok(m.determinant().to_integer().abs())
    }

    /// Exceptional part `G*` of the numerical pullback: `(B + G*) . E_i = 0`
    /// for every vertex, where `B . E_i` is given by `incidence`.
    pub fn numerical_pullback(&self, incidence: &BTreeMap<String, Rational>) -> Result<QDivisor> {
        let rhs = self.vector_from(incidence)?;
        let rhs: Vec<Rational> = rhs.into_iter().map(|x| -x).collect();
        self.solve_divisor(&rhs)
    }

    /// `K . E_i` from adjunction, `2g - 2 - E_i^2`.
    pub fn canonical_degree(&self, i: usize) -> i64 {
        let v = &self.vertices[i];
        2 * v.genus as i64 - 2 - v.self_intersection
    }

    /// The codiscrepancy `L`: `(K + D + L) . E_i = 0` for every vertex, with
    /// `D . E_i` the number of boundary marks on `E_i`.
    pub fn codiscrepancy(&self) -> Result<QDivisor> {
        let rhs: Vec<Rational> = (0..self.len())
            .map(|i| Rational::from_integer(BigInt::from(-(self.canonical_degree(i) + self.marks[i] as i64))))
            .collect();
        self.solve_divisor(&rhs)
    }

    fn solve_divisor(&self, rhs: &[Rational]) -> Result<QDivisor> {
        if self.is_empty() {
            return Ok(QDivisor::new());
        }
        let m = self.require_definite()?;
        let x = m.solve(rhs)?;
        Ok(self.divisor_from(&x))
    }

    /// Dense coefficient vector of `map` in vertex order.
    pub fn vector_from(&self, map: &BTreeMap<String, Rational>) -> Result<Vec<Rational>> {
        let mut v = vec![Rational::zero(); self.len()];
        for (id, c) in map {
            v[self.position(id)?] = c.clone();
        }
        Ok(v)
    }

    /// Dense coefficient vector of a divisor supported on the graph.
    pub fn divisor_vector(&self, d: &QDivisor) -> Result<Vec<Rational>> {
        let mut v = vec![Rational::zero(); self.len()];
        for (id, c) in d.iter() {
            let i = self.position(id).map_err(|_| Error::GraphMismatch(format!("`{id}` is not a vertex")))?;
            v[i] = c.clone();
        }
        Ok(v)
    }

    pub fn divisor_from(&self, coeffs: &[Rational]) -> QDivisor {
        QDivisor::from_terms(self.vertices.iter().zip(coeffs).map(|(v, c)| (v.id.clone(), c.clone())))
    }

    /// Vertex order of the graph as a chain, if it is one.
    fn chain_order(&self) -> Option<Vec<usize>> {
        let n = self.len();
        if n == 0 || self.edges.len() != n - 1 || self.edges.values().any(|&m| m != 1) || !self.is_connected() {
            return None;
        }
        if n == 1 {
            return Some(vec![0]);
        }
        if (0..n).any(|i| self.degree(i) > 2) {
            return None;
        }
        let start = (0..n).find(|&i| self.degree(i) == 1)?;
        Some(self.walk_path(start, None, n))
    }

    fn walk_path(&self, start: usize, avoid: Option<usize>, limit: usize) -> Vec<usize> {
        let mut order = vec![start];
        let mut prev = avoid;
        let mut cur = start;
        while order.len() < limit {
            let next = self.neighbours(cur).into_iter().find(|&w| Some(w) != prev && !order.contains(&w));
            match next {
                Some(w) => {
                    prev = Some(cur);
                    cur = w;
                    order.push(w);
                }
                None => break,
            }
        }
        order
    }

    pub fn classify(&self) -> GraphType {
        let total = self.total_marks();
        if total == 0 {
            return GraphType::LcNormal;
        }
        if self.vertices.iter().any(|v| v.genus != 0) {
            return GraphType::Unclassified;
        }
        if let Some(order) = self.chain_order() {
            let n = order.len();
            let (first, last) = (order[0], order[n - 1]);
            let si = |i: usize| self.vertices[i].self_intersection;
            if total == 1 {
                let marked = if self.marks[first] == 1 { first } else { last };
                if self.marks[marked] == 1 && order.iter().all(|&i| si(i) <= -2) {
                    return GraphType::C1;
                }
            } else if total == 2 {
                let ends_marked = if n == 1 {
                    self.marks[first] == 2
                } else {
                    self.marks[first] == 1 && self.marks[last] == 1
                };
                let has_minus_one = order.iter().any(|&i| si(i) == -1);
                if ends_marked && (!has_minus_one || n == 1) {
                    return GraphType::C2;
                }
            }
            return GraphType::Unclassified;
        }
        if self.is_dh() {
            return GraphType::Dh;
        }
        GraphType::Unclassified
    }

    fn is_dh(&self) -> bool {
        let n = self.len();
        if n < 4 || self.total_marks() != 1 || self.edges.len() != n - 1 || self.edges.values().any(|&m| m != 1) {
            return false;
        }
        if !self.is_connected() || self.vertices.iter().any(|v| v.self_intersection > -2) {
            return false;
        }
        let forks: Vec<usize> = (0..n).filter(|&i| self.degree(i) >= 3).collect();
        let &[fork] = forks.as_slice() else { return false };
        if self.degree(fork) != 3 {
            return false;
        }
        let marked = (0..n).find(|&i| self.marks[i] == 1).expect("one mark");
        if marked == fork || self.degree(marked) != 1 {
            return false;
        }
        let path = self.walk_path(marked, None, n);
        let Some(pos) = path.iter().position(|&v| v == fork) else { return false };
        let chain = &path[..=pos];
        if chain.len() < 2 {
            return false;
        }
        let tails: Vec<usize> = (0..n).filter(|v| !chain.contains(v)).collect();
        tails.len() == 2
            && tails.iter().all(|&t| {
                self.degree(t) == 1
                    && self.multiplicity(t, fork) == 1
                    && self.vertices[t].self_intersection == -2
                    && self.marks[t] == 0
            })
    }

    /// Coefficient of the different at the boundary branch attached to `vertex`.
    pub fn different_coefficient(&self, vertex: &str) -> Result<Rational> {
        let i = self.position(vertex)?;
        if self.marks[i] == 0 {
            return Err(Error::InvalidArgument(format!("vertex `{vertex}` carries no boundary branch")));
        }
        match self.classify() {
            GraphType::C1 => {
                let delta = self.determinant()?;
                Ok(Rational::one() - Rational::new(BigInt::one(), delta))
            }
            GraphType::C2 | GraphType::Dh => Ok(Rational::one()),
            t => Err(Error::Unclassified(t)),
        }
    }

    /// First vertex carrying a boundary mark.
    pub fn first_marked(&self) -> Option<&str> {
        self.marks.iter().position(|&m| m > 0).map(|i| self.vertices[i].id.as_str())
    }

    /// Whether the configuration blows down to a smooth point: repeatedly
    /// contract rational (-1)-curves meeting at most two others transversally.
    pub fn contracts_to_smooth_point(&self) -> bool {
        let n = self.len();
        let mut alive = vec![true; n];
        let mut si: Vec<i64> = self.vertices.iter().map(|v| v.self_intersection).collect();
        let mut m: Vec<Vec<u32>> = vec![vec![0; n]; n];
        for (i, j, mult) in self.edges() {
            m[i][j] = mult;
            m[j][i] = mult;
        }
        if self.vertices.iter().any(|v| v.genus != 0) || !self.is_connected() {
            return false;
        }
        for _ in 0..n {
            let candidate = (0..n).find(|&i| {
                alive[i] && si[i] == -1 && {
                    let nb: Vec<usize> = (0..n).filter(|&j| alive[j] && m[i][j] > 0).collect();
                    nb.len() <= 2 && nb.iter().all(|&j| m[i][j] == 1) && (nb.len() < 2 || m[nb[0]][nb[1]] == 0)
                }
            });
            let Some(i) = candidate else { return false };
            let nb: Vec<usize> = (0..n).filter(|&j| alive[j] && m[i][j] > 0).collect();
            for &j in &nb {
                si[j] += 1;
            }
            if let [a, b] = nb[..] {
                m[a][b] += 1;
                m[b][a] += 1;
            }
            alive[i] = false;
            m[i].iter_mut().for_each(|x| *x = 0);
            for row in m.iter_mut() {
                row[i] = 0;
            }
        }
        alive.iter().all(|a| !a)
    }

    /// Whether the codiscrepancy vanishes identically (canonical singularity,
    /// or a smooth point when the graph is empty).
    pub fn is_canonical(&self) -> bool {
        self.total_marks() == 0 && self.codiscrepancy().map(|l| l.is_zero()).unwrap_or(false)
    }
}

fn chain_builder(self_intersections: &[i64]) -> GraphBuilder {
    let mut b = GraphBuilder::default();
    for (i, &s) in self_intersections.iter().enumerate() {
        b = b.vertex(format!("E{}", i + 1), s);
    }
    for i in 1..self_intersections.len() {
        b = b.edge(format!("E{i}"), format!("E{}", i + 1));
    }
    b
}
