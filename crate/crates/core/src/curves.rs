//! Reduced curves whose only singularities are multi-nodes (points locally
//! isomorphic to the union of the coordinate axes in affine `mu`-space).

use std::collections::{BTreeMap, HashMap};

use crate::divisor::Rational;
use crate::error::{Error, Result};

/// Largest component count for which subcurves are enumerated by default.
pub const DEFAULT_SUBCURVE_CAP: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveComponent {
    pub id: String,
    pub genus: u32,
}

/// A singular point with the number of local branches on each component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiNode {
    pub id: String,
    pub branches: Vec<(String, u32)>,
}

impl MultiNode {
    pub fn multiplicity(&self) -> u32 {
        self.branches.iter().map(|(_, c)| c).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiNodalCurve {
    components: Vec<CurveComponent>,
    nodes: Vec<MultiNode>,
    index: HashMap<String, usize>,
}

/// A non-empty set of components together with the induced singularities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subcurve {
    pub components: Vec<String>,
    /// Arithmetic genus of the normalisation, `1 - sum(1 - g_i)`.
    pub normalization_genus: i64,
    /// `(node id, branches inside the subcurve, branches on the whole curve)`
    /// for every node of the ambient curve touching the subcurve.
    pub multiplicities: Vec<(String, u32, u32)>,
    pub arithmetic_genus: i64,
}

impl Subcurve {
    /// Number of points that are singular on the ambient curve but smooth on
    /// the subcurve.
    pub fn smooth_singular_count(&self) -> u32 {
        self.multiplicities.iter().filter(|(_, b, total)| *b == 1 && *total >= 2).count() as u32
    }

    pub fn is_nodal(&self) -> bool {
        self.multiplicities.iter().all(|(_, b, _)| *b <= 2)
    }

    pub fn is_singular(&self) -> bool {
        self.multiplicities.iter().any(|(_, b, _)| *b >= 2)
    }

    /// Lower bounds for the degree of the log canonical divisor on the
    /// normalisation of this subcurve.
    pub fn degree_bounds(&self) -> DegreeBounds {
        let mults: Vec<u32> = self.multiplicities.iter().filter(|(_, _, t)| *t >= 2).map(|(_, b, _)| *b).collect();
        deg_comparison_bound(self.normalization_genus, &mults, Some(self.smooth_singular_count()))
    }
}

impl MultiNodalCurve {
    pub fn new(components: Vec<CurveComponent>, nodes: Vec<MultiNode>) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, c) in components.iter().enumerate() {
            if index.insert(c.id.clone(), i).is_some() {
                return Err(Error::InvalidCurve(format!("duplicate component `{}`", c.id)));
            }
        }
        let mut seen = std::collections::HashSet::new();
        for node in &nodes {
            if !seen.insert(node.id.as_str()) {
                return Err(Error::InvalidCurve(format!("duplicate node `{}`", node.id)));
            }
            if node.multiplicity() < 2 {
                return Err(Error::InvalidCurve(format!("node `{}` has fewer than two branches", node.id)));
            }
            if let Some((c, _)) = node.branches.iter().find(|(c, _)| !index.contains_key(c)) {
                return Err(Error::InvalidCurve(format!("node `{}` references unknown component `{c}`", node.id)));
            }
        }
        Ok(Self { components, nodes, index })
    }

    /// Convenience constructor from `(id, genus)` pairs and `(node, branches)`.
    pub fn from_parts(components: &[(&str, u32)], nodes: &[(&str, &[(&str, u32)])]) -> Result<Self> {
        Self::new(
            components.iter().map(|&(id, genus)| CurveComponent { id: id.into(), genus }).collect(),
            nodes
                .iter()
                .map(|&(id, br)| MultiNode { id: id.into(), branches: br.iter().map(|&(c, n)| (c.into(), n)).collect() })
                .collect(),
        )
    }

    pub fn components(&self) -> &[CurveComponent] {
        &self.components
    }

    pub fn nodes(&self) -> &[MultiNode] {
        &self.nodes
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn is_nodal(&self) -> bool {
        self.nodes.iter().all(|n| n.multiplicity() <= 2)
    }

    fn mask_of(&self, subset: &[&str]) -> Result<Vec<bool>> {
        let mut mask = vec![false; self.components.len()];
        for id in subset {
            let i = *self.index.get(*id).ok_or_else(|| Error::InvalidCurve(format!("unknown component `{id}`")))?;
            mask[i] = true;
        }
        Ok(mask)
    }

    fn subcurve_of_mask(&self, mask: &[bool]) -> Result<Subcurve> {
        if !mask.iter().any(|&b| b) {
            return Err(Error::EmptySubcurve);
        }
        let components: Vec<String> =
            self.components.iter().zip(mask).filter(|(_, &m)| m).map(|(c, _)| c.id.clone()).collect();
        let normalization_genus =
            1 - self.components.iter().zip(mask).filter(|(_, &m)| m).map(|(c, _)| 1 - c.genus as i64).sum::<i64>();
        let mut multiplicities = Vec::new();
        let mut correction = 0i64;
        for node in &self.nodes {
            let inside: u32 = node.branches.iter().filter(|(c, _)| mask[self.index[c]]).map(|(_, n)| n).sum();
            if inside > 0 {
                multiplicities.push((node.id.clone(), inside, node.multiplicity()));
                correction += inside as i64 - 1;
            }
        }
        Ok(Subcurve { components, normalization_genus, multiplicities, arithmetic_genus: normalization_genus + correction })
    }

    pub fn subcurve(&self, subset: &[&str]) -> Result<Subcurve> {
        self.subcurve_of_mask(&self.mask_of(subset)?)
    }

    /// `p_a(B) = p_a(B^nu) + sum_p (mu_p(B) - 1)`.
    pub fn arithmetic_genus(&self, subset: &[&str]) -> Result<i64> {
        Ok(self.subcurve(subset)?.arithmetic_genus)
    }

    pub fn whole(&self) -> Result<Subcurve> {
        self.subcurve_of_mask(&vec![true; self.components.len()])
    }

    /// All `2^n - 1` non-empty subcurves.
    pub fn subcurves(&self) -> Result<impl Iterator<Item = Subcurve> + '_> {
        self.subcurves_with_cap(DEFAULT_SUBCURVE_CAP)
    }

    pub fn subcurves_with_cap(&self, cap: usize) -> Result<impl Iterator<Item = Subcurve> + '_> {
        let n = self.components.len();
        if n > cap || n >= 63 {
            return Err(Error::TooManyComponents { count: n, cap });
        }
        Ok((1u64..(1u64 << n)).map(move |bits| {
            let mask: Vec<bool> = (0..n).map(|i| bits >> i & 1 == 1).collect();
            self.subcurve_of_mask(&mask).expect("non-empty mask")
        }))
    }
}

/// A multi-nodal curve with a degree on each component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolarizedCurve {
    pub curve: MultiNodalCurve,
    pub degrees: BTreeMap<String, Rational>,
}

impl PolarizedCurve {
    pub fn new(curve: MultiNodalCurve, degrees: BTreeMap<String, Rational>) -> Result<Self> {
        for c in curve.components() {
            if !degrees.contains_key(&c.id) {
                return Err(Error::InvalidCurve(format!("no degree for component `{}`", c.id)));
            }
        }
        if let Some(k) = degrees.keys().find(|k| !curve.index.contains_key(*k)) {
            return Err(Error::InvalidCurve(format!("degree for unknown component `{k}`")));
        }
        Ok(Self { curve, degrees })
    }

    pub fn degree(&self, b: &Subcurve) -> Rational {
        b.components.iter().map(|c| self.degrees[c].clone()).sum()
    }

    /// The same curve with every degree multiplied by `m`.
    pub fn scaled(&self, m: &Rational) -> Self {
        Self { curve: self.curve.clone(), degrees: self.degrees.iter().map(|(k, v)| (k.clone(), v * m)).collect() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointKind {
    /// A normal crossing point with local intersection numbers of the two branches.
    NormalCrossing(u32, u32),
    /// A pinch point with local intersection number `I`.
    Pinch(u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LocalCorrection {
    pub kind: PointKind,
    pub n: i64,
    pub d: i64,
}

pub fn local_correction(kind: PointKind) -> LocalCorrection {
    let (n, d) = match kind {
        PointKind::NormalCrossing(a, b) => (a.min(b) as i64, (a as i64 - b as i64).abs()),
        PointKind::Pinch(i) => ((i / 2) as i64, (i % 2) as i64),
    };
    let c = LocalCorrection { kind, n, d };
    debug_assert_eq!(2 * c.n + c.d, c.total_intersection());
    c
}

impl LocalCorrection {
    pub fn total_intersection(&self) -> i64 {
        match self.kind {
            PointKind::NormalCrossing(a, b) => a as i64 + b as i64,
            PointKind::Pinch(i) => i as i64,
        }
    }
}

/// `chi(O_F) = chi(O_{F_normalised}) - sum n_q`.
pub fn chi_via_semismooth_rr(chi_normalization: i64, corrections: &[LocalCorrection]) -> i64 {
    chi_normalization - corrections.iter().map(|c| c.n).sum::<i64>()
}

/// The chained lower bounds for `deg (K + Delta)` on the normalisation of a
/// subcurve `B` of `D + Delta`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DegreeBounds {
    /// `2 p_a(B^nu) - 2 + sum mu_p(B)` over singular points of `D + Delta`.
    pub normalized: i64,
    /// `2 p_a(B) - 2 + sum (2 - mu_p(B)) + s`, when `s` is known.
    pub with_smooth: Option<i64>,
    /// `2 p_a(B) - 2 + sum (2 - mu_p(B))` over singular points of `B`.
    pub singular_only: i64,
}

/// `pa_nu` is `p_a(B^nu)`, `multiplicities` the values `mu_p(B)` at the
/// singular points of `D + Delta`, and `s` the number of those points that
/// are smooth on `B` (not applicable for curves outside a surface).
pub fn deg_comparison_bound(pa_nu: i64, multiplicities: &[u32], s: Option<u32>) -> DegreeBounds {
    let pa = pa_nu + multiplicities.iter().filter(|&&m| m >= 2).map(|&m| m as i64 - 1).sum::<i64>();
    let singular: i64 = multiplicities.iter().filter(|&&m| m >= 2).map(|&m| 2 - m as i64).sum();
    let normalized = 2 * pa_nu - 2 + multiplicities.iter().map(|&m| m as i64).sum::<i64>();
    let singular_only = 2 * pa - 2 + singular;
    DegreeBounds { normalized, with_smooth: s.map(|s| singular_only + s as i64), singular_only }
}
