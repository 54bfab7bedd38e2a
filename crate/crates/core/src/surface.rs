//! Stable log surfaces described by their normalisation: normal components
//! with curve-class intersection data, the conductor and boundary curves on
//! them, and the gluing involution on the normalised conductor.
//!
//! Intersection numbers between classes on different components are zero.
//! Curve names and marked-point ids are global across components.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::criteria::Hypotheses;
use crate::curves::{CurveComponent, MultiNodalCurve, MultiNode, PolarizedCurve};
use crate::divisor::{format_rational, QDivisor, Rational};
use crate::error::{Error, Result};
use crate::graph::{ExceptionalGraph, GraphType};
use crate::linalg::Matrix;

/// A marked point on the normalisation of a conductor or boundary curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedPoint {
    pub id: String,
    /// Coefficient of the different; derived when absent.
    pub different: Option<Rational>,
    /// The other preimage of a node of `D + Delta` on the same component.
    pub node_partner: Option<String>,
    /// Singular point of the component lying under this point.
    pub location: Option<String>,
}

impl MarkedPoint {
    pub fn new(id: impl Into<String>) -> Self {
        Self { id: id.into(), different: None, node_partner: None, location: None }
    }

    pub fn with_different(mut self, d: Rational) -> Self {
        self.different = Some(d);
        self
    }

    pub fn with_partner(mut self, p: impl Into<String>) -> Self {
        self.node_partner = Some(p.into());
        self
    }

    pub fn at(mut self, location: impl Into<String>) -> Self {
        self.location = Some(location.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Curve {
    pub name: String,
    /// Numerical class in terms of the component's basis classes.
    pub class: QDivisor,
    /// Geometric genus of the normalisation.
    pub genus: u32,
    pub points: Vec<MarkedPoint>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularPoint {
    pub location: String,
    pub graph: ExceptionalGraph,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalComponent {
    pub id: String,
    /// `chi(O)` of the component.
    pub chi: i64,
    pub classes: Vec<String>,
    pub form: Matrix,
    pub canonical: QDivisor,
    pub curves: Vec<Curve>,
    pub conductor: Vec<String>,
    pub boundary: Vec<String>,
    pub singular_points: Vec<SingularPoint>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GluingInvolution {
    /// Conductor curves glued to each other; `(c, c)` for a curve glued to itself.
    pub pairing: Vec<(String, String)>,
    /// The involution on marked points of conductor curves, fixed points as `(p, p)`.
    pub point_map: Vec<(String, String)>,
}

/// Hypothesis flags stated alongside the data; any flag left `None` is derived.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DeclaredHypotheses {
    pub normal: Option<bool>,
    pub d_union_delta_nodal: Option<bool>,
    pub conductor_smooth_normalization: Option<bool>,
    pub canonical_off_conductor: Option<bool>,
    pub semi_canonical: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StableLogSurface {
    pub components: Vec<NormalComponent>,
    pub gluing: GluingInvolution,
    pub global_index: u32,
    pub declared: DeclaredHypotheses,
}

/// A failed consistency check.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Violation {
    DuplicateName(String),
    UnknownName { context: String, name: String },
    FormShape { component: String },
    AsymmetricForm { component: String },
    ConductorBoundaryOverlap { component: String, curve: String },
    Pairing { curve: String, problem: String },
    PointMap { point: String, problem: String },
    DiffNotInvariant { point: String, image: String, left: Rational, right: Rational },
    NodePartner { point: String, problem: String },
    NonIntegral { quantity: String, value: Rational },
    MultiNodeDifferent { point: String, value: Rational },
    GenusMismatch { left: String, right: String },
    Ramification { curve: String, genus: u32, fixed_points: u32 },
    Hypothesis { flag: String, declared: bool, derived: bool },
    ZeroIndex,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateName(n) => write!(f, "duplicate name `{n}`"),
            Violation::UnknownName { context, name } => write!(f, "unknown name `{name}` in {context}"),
            Violation::FormShape { component } => write!(f, "intersection form of `{component}` does not match its classes"),
            Violation::AsymmetricForm { component } => write!(f, "intersection form of `{component}` is not symmetric"),
            Violation::ConductorBoundaryOverlap { component, curve } => {
                write!(f, "curve `{curve}` on `{component}` is both conductor and boundary")
            }
            Violation::Pairing { curve, problem } => write!(f, "pairing of `{curve}`: {problem}"),
            Violation::PointMap { point, problem } => write!(f, "point map at `{point}`: {problem}"),
            Violation::DiffNotInvariant { point, image, left, right } => write!(
                f,
                "Diff not τ-invariant: `{point}` has {} but `{image}` has {}",
                format_rational(left),
                format_rational(right)
            ),
            Violation::NodePartner { point, problem } => write!(f, "node partner of `{point}`: {problem}"),
            Violation::NonIntegral { quantity, value } => {
                write!(f, "{quantity} = {} is not an integer", format_rational(value))
            }
            Violation::MultiNodeDifferent { point, value } => write!(
                f,
                "point `{point}` lies over a singular point of D but has different {} instead of 1",
                format_rational(value)
            ),
            Violation::GenusMismatch { left, right } => write!(f, "paired curves `{left}` and `{right}` have different genera"),
            Violation::Ramification { curve, genus, fixed_points } => {
                write!(f, "curve `{curve}` of genus {genus} cannot be a double cover with {fixed_points} fixed points")
            }
            Violation::Hypothesis { flag, declared, derived } => {
                write!(f, "hypothesis `{flag}` declared {declared} but the data gives {derived}")
            }
            Violation::ZeroIndex => write!(f, "global index must be positive"),
        }
    }
}

/// Genus of the quotient of a genus-`g` curve by an involution with
/// `fixed_points` fixed points: `2g - 2 = 2(2g' - 2) + r`.
pub fn quotient_genus(genus: u32, fixed_points: u32) -> Result<u32> {
    let err = Error::InconsistentRamification { genus, fixed_points };
    let num = 2 * genus as i64 + 2 - fixed_points as i64;
    if num < 0 || num % 4 != 0 || !fixed_points.is_multiple_of(2) {
        return Err(err);
    }
    Ok((num / 4) as u32)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PointType {
    /// Only node preimages, glued in a cycle.
    I,
    /// Node preimages glued in a chain with two ends.
    II,
}

impl fmt::Display for PointType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PointType::I => "I",
            PointType::II => "II",
        })
    }
}

/// An equivalence class of marked points containing a node preimage.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiNodePoint {
    pub id: String,
    /// Number of branches of `D + Delta` through the point.
    pub multiplicity: u32,
    /// Number of branches of `D` alone.
    pub conductor_multiplicity: u32,
    pub point_type: PointType,
    pub node_count: u32,
    pub members: Vec<String>,
    /// `CycleDegenerateCusp` for cyclic gluing of at least two nodes.
    pub kind: Option<GraphType>,
}

impl MultiNodePoint {
    pub fn is_singular(&self) -> bool {
        self.multiplicity >= 2
    }
}

/// An irreducible component of `D + Delta`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocusComponent {
    pub id: String,
    pub curves: Vec<String>,
    pub genus: u32,
    /// Numerical degree of `K + Delta` on the component.
    pub degree: Rational,
    pub boundary: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonNormalLocusReport {
    pub points: Vec<MultiNodePoint>,
    pub components: Vec<LocusComponent>,
    /// `D + Delta` as an abstract curve, polarised by `K + Delta`.
    pub curve: PolarizedCurve,
}

impl NonNormalLocusReport {
    /// Number of irreducible components of the non-normal locus `D`.
    pub fn component_count(&self) -> usize {
        self.components.iter().filter(|c| !c.boundary).count()
    }

    pub fn singular_points(&self) -> impl Iterator<Item = &MultiNodePoint> {
        self.points.iter().filter(|p| p.is_singular())
    }

    pub fn is_nodal(&self) -> bool {
        self.points.iter().all(|p| p.multiplicity <= 2)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceInvariants {
    pub k_squared: Rational,
    pub chi: i64,
    pub chi_normalization: i64,
    pub chi_conductor: i64,
    pub chi_non_normal_locus: i64,
}

struct PointRef<'a> {
    component: usize,
    curve: &'a Curve,
    point: &'a MarkedPoint,
}

/// Name lookups shared by validation and the queries.
struct Lookup<'a> {
    curves: HashMap<&'a str, (usize, &'a Curve)>,
    points: HashMap<&'a str, PointRef<'a>>,
    conductor: BTreeSet<&'a str>,
    pair: HashMap<&'a str, &'a str>,
    tau: HashMap<&'a str, &'a str>,
}

impl StableLogSurface {
    fn lookup(&self) -> (Lookup<'_>, Vec<Violation>) {
        let mut v = Vec::new();
        let mut curves = HashMap::new();
        let mut points = HashMap::new();
        let mut ids = BTreeSet::new();
        for comp in &self.components {
            if !ids.insert(comp.id.as_str()) {
                v.push(Violation::DuplicateName(comp.id.clone()));
            }
        }
        for (ci, comp) in self.components.iter().enumerate() {
            for curve in &comp.curves {
                if curves.insert(curve.name.as_str(), (ci, curve)).is_some() {
                    v.push(Violation::DuplicateName(curve.name.clone()));
                }
                for p in &curve.points {
                    let r = PointRef { component: ci, curve, point: p };
                    if points.insert(p.id.as_str(), r).is_some() {
                        v.push(Violation::DuplicateName(p.id.clone()));
                    }
                }
            }
        }
        let conductor = self.components.iter().flat_map(|c| c.conductor.iter().map(String::as_str)).collect();
        let mut pair = HashMap::new();
        for (a, b) in &self.gluing.pairing {
            for (x, y) in [(a, b), (b, a)] {
                if let Some(prev) = pair.insert(x.as_str(), y.as_str()) {
                    if prev != y.as_str() || a != b {
                        v.push(Violation::Pairing { curve: x.clone(), problem: "listed more than once".into() });
                    }
                }
            }
        }
        let mut tau = HashMap::new();
        for (a, b) in &self.gluing.point_map {
            for (x, y) in [(a, b), (b, a)] {
                if let Some(prev) = tau.insert(x.as_str(), y.as_str()) {
                    if prev != y.as_str() || a != b {
                        v.push(Violation::PointMap { point: x.clone(), problem: "listed more than once".into() });
                    }
                }
            }
        }
        (Lookup { curves, points, conductor, pair, tau }, v)
    }

    /// `K + D + Delta` on component `i`, in its basis classes.
    pub fn log_canonical(&self, i: usize) -> QDivisor {
        let comp = &self.components[i];
        let mut l = comp.canonical.clone();
        for curve in &comp.curves {
            if comp.conductor.contains(&curve.name) || comp.boundary.contains(&curve.name) {
                l = &l + &curve.class;
            }
        }
        l
    }

    /// Intersection number of two divisors on component `i`.
    pub fn intersect(&self, i: usize, a: &QDivisor, b: &QDivisor) -> Result<Rational> {
        let comp = &self.components[i];
        let va = class_vector(comp, a)?;
        let vb = class_vector(comp, b)?;
        Ok(comp.form.bilinear(&va, &vb))
    }

    /// Coefficient of the different at a marked point: an explicit value,
    /// else 1 at node preimages, else the value dictated by the graph of the
    /// singular point below, else 0.
    pub fn effective_different(&self, point: &str) -> Result<Rational> {
        let (lk, _) = self.lookup();
        let r = lk.points.get(point).ok_or_else(|| Error::UnknownName(point.to_string()))?;
        self.different_of(r)
    }

    fn different_of(&self, r: &PointRef<'_>) -> Result<Rational> {
        if let Some(d) = &r.point.different {
            return Ok(d.clone());
        }
        if r.point.node_partner.is_some() {
            return Ok(Rational::one());
        }
        if let Some(loc) = &r.point.location {
            let comp = &self.components[r.component];
            let sp = comp
                .singular_points
                .iter()
                .find(|s| &s.location == loc)
                .ok_or_else(|| Error::UnknownName(loc.clone()))?;
            if let Some(v) = sp.graph.first_marked() {
                return match sp.graph.classify() {
                    GraphType::C1 | GraphType::C2 | GraphType::Dh => sp.graph.different_coefficient(v),
                    _ => Ok(Rational::zero()),
                };
            }
        }
        Ok(Rational::zero())
    }

    /// All violations, sorted and deduplicated; empty when the data is consistent.
    pub fn validate(&self) -> Vec<Violation> {
        let (lk, mut v) = self.lookup();
        if self.global_index == 0 {
            v.push(Violation::ZeroIndex);
        }
        for (ci, comp) in self.components.iter().enumerate() {
            self.validate_component(ci, comp, &mut v);
        }
        self.validate_gluing(&lk, &mut v);
        if v.is_empty() {
            self.validate_numerics(&mut v);
        }
        if v.is_empty() {
            self.validate_locus(&lk, &mut v);
        }
        v.sort();
        v.dedup();
        v
    }

    fn validate_component(&self, _ci: usize, comp: &NormalComponent, v: &mut Vec<Violation>) {
        let n = comp.classes.len();
        if comp.form.rows() != n || comp.form.cols() != n {
            v.push(Violation::FormShape { component: comp.id.clone() });
        } else if !comp.form.is_symmetric() {
            v.push(Violation::AsymmetricForm { component: comp.id.clone() });
        }
        let classes: BTreeSet<&str> = comp.classes.iter().map(String::as_str).collect();
        if classes.len() != n {
            v.push(Violation::DuplicateName(format!("class list of `{}`", comp.id)));
        }
        let unknown = |ctx: String, name: &str| Violation::UnknownName { context: ctx, name: name.to_string() };
        for name in comp.canonical.support().filter(|s| !classes.contains(s)) {
            v.push(unknown(format!("canonical class of `{}`", comp.id), name));
        }
        let curve_names: BTreeSet<&str> = comp.curves.iter().map(|c| c.name.as_str()).collect();
        for curve in &comp.curves {
            for name in curve.class.support().filter(|s| !classes.contains(s)) {
                v.push(unknown(format!("class of curve `{}`", curve.name), name));
            }
            for p in &curve.points {
                if let Some(loc) = &p.location {
                    if !comp.singular_points.iter().any(|s| &s.location == loc) {
                        v.push(unknown(format!("location of point `{}`", p.id), loc));
                    }
                }
            }
        }
        for name in comp.conductor.iter().chain(&comp.boundary) {
            if !curve_names.contains(name.as_str()) {
                v.push(unknown(format!("conductor/boundary of `{}`", comp.id), name));
            }
        }
        for name in &comp.conductor {
            if comp.boundary.contains(name) {
                v.push(Violation::ConductorBoundaryOverlap { component: comp.id.clone(), curve: name.clone() });
            }
        }
        let mut locs = BTreeSet::new();
        for sp in &comp.singular_points {
            if !locs.insert(sp.location.as_str()) {
                v.push(Violation::DuplicateName(sp.location.clone()));
            }
        }
    }

    fn validate_gluing(&self, lk: &Lookup<'_>, v: &mut Vec<Violation>) {
        for (a, b) in &self.gluing.pairing {
            for c in [a, b] {
                if !lk.conductor.contains(c.as_str()) {
                    v.push(Violation::Pairing { curve: c.clone(), problem: "not a conductor curve".into() });
                }
            }
            if let (Some((_, ca)), Some((_, cb))) = (lk.curves.get(a.as_str()), lk.curves.get(b.as_str())) {
                if ca.genus != cb.genus {
                    v.push(Violation::GenusMismatch { left: a.clone(), right: b.clone() });
                }
            }
        }
        for c in &lk.conductor {
            if !lk.pair.contains_key(c) {
                v.push(Violation::Pairing { curve: c.to_string(), problem: "not glued".into() });
            }
        }
        for (a, b) in &self.gluing.point_map {
            for p in [a, b] {
                if !lk.points.contains_key(p.as_str()) {
                    v.push(Violation::UnknownName { context: "point map".into(), name: p.clone() });
                }
            }
        }
        for (id, r) in &lk.points {
            let on_conductor = lk.conductor.contains(r.curve.name.as_str());
            match (on_conductor, lk.tau.get(id)) {
                (true, None) => v.push(Violation::PointMap { point: id.to_string(), problem: "not mapped".into() }),
                (false, Some(_)) => {
                    v.push(Violation::PointMap { point: id.to_string(), problem: "not on a conductor curve".into() })
                }
                (true, Some(img)) => {
                    if let Some(ri) = lk.points.get(img) {
                        if lk.pair.get(r.curve.name.as_str()) != Some(&ri.curve.name.as_str()) {
                            v.push(Violation::PointMap {
                                point: id.to_string(),
                                problem: format!("image `{img}` is not on the paired curve"),
                            });
                        }
                        if let (Ok(a), Ok(b)) = (self.different_of(r), self.different_of(ri)) {
                            if a != b && id < img {
                                v.push(Violation::DiffNotInvariant {
                                    point: id.to_string(),
                                    image: img.to_string(),
                                    left: a,
                                    right: b,
                                });
                            }
                        }
                    }
                }
                (false, None) => {}
            }
            if let Some(partner) = &r.point.node_partner {
                match lk.points.get(partner.as_str()) {
                    None => v.push(Violation::UnknownName { context: format!("node partner of `{id}`"), name: partner.clone() }),
                    Some(rp) => {
                        if partner == id {
                            v.push(Violation::NodePartner { point: id.to_string(), problem: "partnered with itself".into() });
                        } else if rp.point.node_partner.as_deref() != Some(*id) {
                            v.push(Violation::NodePartner { point: id.to_string(), problem: "not symmetric".into() });
                        } else if rp.component != r.component {
                            v.push(Violation::NodePartner { point: id.to_string(), problem: "on another component".into() });
                        }
                    }
                }
            }
        }
        for (a, b) in &self.gluing.pairing {
            if a == b {
                if let Some((_, c)) = lk.curves.get(a.as_str()) {
                    let fixed = c.points.iter().filter(|p| lk.tau.get(p.id.as_str()) == Some(&p.id.as_str())).count() as u32;
                    if quotient_genus(c.genus, fixed).is_err() {
                        v.push(Violation::Ramification { curve: a.clone(), genus: c.genus, fixed_points: fixed });
                    }
                }
            }
        }
    }

    fn validate_numerics(&self, v: &mut Vec<Violation>) {
        let index = Rational::from_integer(BigInt::from(self.global_index));
        for (ci, comp) in self.components.iter().enumerate() {
            let l = self.log_canonical(ci);
            let mut check = |what: String, d: &QDivisor| {
                if let Ok(x) = self.intersect(ci, &l, d) {
                    let scaled = &index * x;
                    if !scaled.is_integer() {
                        v.push(Violation::NonIntegral { quantity: what, value: scaled });
                    }
                }
            };
            for class in &comp.classes {
                check(format!("I (K+D+Delta).{class} on `{}`", comp.id), &QDivisor::prime(class.clone()));
            }
            for curve in &comp.curves {
                check(format!("I (K+D+Delta).{} on `{}`", curve.name, comp.id), &curve.class);
            }
        }
        if let Ok(k2) = self.k_squared() {
            let scaled = &index * &index * k2;
            if !scaled.is_integer() {
                v.push(Violation::NonIntegral { quantity: "I^2 (K+Delta)^2".into(), value: scaled });
            }
        }
    }

    fn validate_locus(&self, lk: &Lookup<'_>, v: &mut Vec<Violation>) {
        let Ok(locus) = self.locus_unchecked(lk) else { return };
        for p in locus.points.iter().filter(|p| p.is_singular()) {
            for m in &p.members {
                if let Ok(d) = self.different_of(&lk.points[m.as_str()]) {
                    if !d.is_one() {
                        v.push(Violation::MultiNodeDifferent { point: m.clone(), value: d });
                    }
                }
            }
        }
        let derived = self.derive_flags(lk, &locus);
        let d = &self.declared;
        let strict = [("normal", d.normal, derived.normal), ("d_union_delta_nodal", d.d_union_delta_nodal, derived.nodal)];
        for (flag, declared, derived) in strict {
            if let Some(x) = declared {
                if x != derived {
                    v.push(Violation::Hypothesis { flag: flag.into(), declared: x, derived });
                }
            }
        }
        let upper = [
            ("conductor_smooth_normalization", d.conductor_smooth_normalization, derived.conductor_smooth),
            ("canonical_off_conductor", d.canonical_off_conductor, derived.canonical_off),
        ];
        for (flag, declared, derived) in upper {
            if declared == Some(true) && !derived {
                v.push(Violation::Hypothesis { flag: flag.into(), declared: true, derived });
            }
        }
        if d.semi_canonical == Some(true) {
            let consequences = [
                ("d_union_delta_nodal", derived.nodal),
                ("conductor_smooth_normalization", derived.conductor_smooth),
                ("canonical_off_conductor", derived.canonical_off),
            ];
            for (flag, ok) in consequences {
                if !ok {
                    v.push(Violation::Hypothesis { flag: format!("{flag} (implied by semi_canonical)"), declared: true, derived: false });
                }
            }
        }
    }

    fn require_valid(&self) -> Result<()> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidTriple(v))
        }
    }

    fn k_squared(&self) -> Result<Rational> {
        let mut total = Rational::zero();
        for i in 0..self.components.len() {
            let l = self.log_canonical(i);
            total += self.intersect(i, &l, &l)?;
        }
        Ok(total)
    }

    /// `(K + D + Delta)^2` restricted to each component.
    pub fn component_squares(&self) -> Result<Vec<Rational>> {
        (0..self.components.len())
            .map(|i| {
                let l = self.log_canonical(i);
                self.intersect(i, &l, &l)
            })
            .collect()
    }

    pub fn non_normal_locus(&self) -> Result<NonNormalLocusReport> {
        self.require_valid()?;
        let (lk, _) = self.lookup();
        self.locus_unchecked(&lk)
    }

    fn locus_unchecked(&self, lk: &Lookup<'_>) -> Result<NonNormalLocusReport> {
        let ids: Vec<&str> = {
            let mut ids: Vec<&str> = lk.points.keys().copied().collect();
            ids.sort_unstable();
            ids
        };
        let pos: HashMap<&str, usize> = ids.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let mut orbits = UnionFind::new(ids.len());
        let mut classes = UnionFind::new(ids.len());
        for (&a, &b) in &lk.tau {
            if let (Some(&i), Some(&j)) = (pos.get(a), pos.get(b)) {
                orbits.union(i, j);
                classes.union(i, j);
            }
        }
        for (&id, r) in &lk.points {
            if let Some(p) = r.point.node_partner.as_deref().and_then(|p| pos.get(p)) {
                classes.union(pos[id], *p);
            }
        }

        // Components of D + Delta: pairing orbits, then boundary curves.
        let mut components = Vec::new();
        let mut component_of: HashMap<&str, String> = HashMap::new();
        for (a, b) in &self.gluing.pairing {
            let (ca, ia) = (lk.curves[a.as_str()].1, lk.curves[a.as_str()].0);
            let la = self.log_canonical(ia);
            let (id, curves, genus, degree) = if a == b {
                let fixed = ca.points.iter().filter(|p| lk.tau.get(p.id.as_str()) == Some(&p.id.as_str())).count() as u32;
                let half = Rational::new(BigInt::one(), BigInt::from(2));
                (a.clone(), vec![a.clone()], quotient_genus(ca.genus, fixed)?, self.intersect(ia, &la, &ca.class)? * half)
            } else {
                let (ib, cb) = lk.curves[b.as_str()];
                let lb = self.log_canonical(ib);
                let sum = self.intersect(ia, &la, &ca.class)? + self.intersect(ib, &lb, &cb.class)?;
                (format!("{a}+{b}"), vec![a.clone(), b.clone()], ca.genus, sum / Rational::from_integer(BigInt::from(2)))
            };
            for c in &curves {
                component_of.insert(lk.curves[c.as_str()].1.name.as_str(), id.clone());
            }
            components.push(LocusComponent { id, curves, genus, degree, boundary: false });
        }
        for (ci, comp) in self.components.iter().enumerate() {
            let l = self.log_canonical(ci);
            for name in &comp.boundary {
                let curve = lk.curves[name.as_str()].1;
                component_of.insert(curve.name.as_str(), name.clone());
                components.push(LocusComponent {
                    id: name.clone(),
                    curves: vec![name.clone()],
                    genus: curve.genus,
                    degree: self.intersect(ci, &l, &curve.class)?,
                    boundary: true,
                });
            }
        }

        let mut grouped: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..ids.len() {
            grouped.entry(classes.find(i)).or_default().push(i);
        }
        let mut points = Vec::new();
        let mut nodes = Vec::new();
        for members in grouped.values() {
            let refs: Vec<&PointRef<'_>> = members.iter().map(|&i| &lk.points[ids[i]]).collect();
            let node_count = refs.iter().filter(|r| r.point.node_partner.is_some()).count() as u32;
            if node_count == 0 {
                continue;
            }
            let orbit_roots: BTreeSet<usize> = members.iter().map(|&i| orbits.find(i)).collect();
            let conductor_roots: BTreeSet<usize> = members
                .iter()
                .filter(|&&i| lk.conductor.contains(lk.points[ids[i]].curve.name.as_str()))
                .map(|&i| orbits.find(i))
                .collect();
            let cyclic = refs.iter().all(|r| {
                r.point.node_partner.is_some()
                    && lk.conductor.contains(r.curve.name.as_str())
                    && lk.tau.get(r.point.id.as_str()) != Some(&r.point.id.as_str())
            });
            let point_type = if cyclic { PointType::I } else { PointType::II };
            let multiplicity = orbit_roots.len() as u32;
            let id = ids[members[0]].to_string();
            let mut branches: BTreeMap<String, u32> = BTreeMap::new();
            for root in &orbit_roots {
                let curve = &lk.points[ids[*root]].curve.name;
                *branches.entry(component_of[curve.as_str()].clone()).or_default() += 1;
            }
            if multiplicity >= 2 {
                nodes.push(MultiNode { id: id.clone(), branches: branches.into_iter().collect() });
            }
            points.push(MultiNodePoint {
                id,
                multiplicity,
                conductor_multiplicity: conductor_roots.len() as u32,
                point_type,
                node_count: node_count / 2,
                members: members.iter().map(|&i| ids[i].to_string()).collect(),
                kind: (cyclic && multiplicity >= 2).then_some(GraphType::CycleDegenerateCusp),
            });
        }
        let curve = MultiNodalCurve::new(
            components.iter().map(|c| CurveComponent { id: c.id.clone(), genus: c.genus }).collect(),
            nodes,
        )?;
        let degrees = components.iter().map(|c| (c.id.clone(), c.degree.clone())).collect();
        Ok(NonNormalLocusReport { points, components, curve: PolarizedCurve::new(curve, degrees)? })
    }

    pub fn invariants(&self) -> Result<SurfaceInvariants> {
        let locus = self.non_normal_locus()?;
        let (lk, _) = self.lookup();
        let chi_normalization: i64 = self.components.iter().map(|c| c.chi).sum();
        let mut chi_conductor: i64 = lk.conductor.iter().map(|c| 1 - lk.curves[c].1.genus as i64).sum();
        let conductor_nodes = lk
            .points
            .values()
            .filter(|r| {
                lk.conductor.contains(r.curve.name.as_str())
                    && r.point
                        .node_partner
                        .as_deref()
                        .is_some_and(|p| lk.conductor.contains(lk.points[p].curve.name.as_str()))
            })
            .count() as i64;
        chi_conductor -= conductor_nodes / 2;
        let chi_locus = locus.components.iter().filter(|c| !c.boundary).map(|c| 1 - c.genus as i64).sum::<i64>()
            - locus.points.iter().map(|p| (p.conductor_multiplicity as i64 - 1).max(0)).sum::<i64>();
        Ok(SurfaceInvariants {
            k_squared: self.k_squared()?,
            chi: chi_normalization + chi_locus - chi_conductor,
            chi_normalization,
            chi_conductor,
            chi_non_normal_locus: chi_locus,
        })
    }

    fn derive_flags(&self, lk: &Lookup<'_>, locus: &NonNormalLocusReport) -> DerivedFlags {
        let mut conductor_locations: BTreeSet<(usize, &str)> = BTreeSet::new();
        for r in lk.points.values() {
            if let Some(loc) = &r.point.location {
                if lk.conductor.contains(r.curve.name.as_str()) {
                    conductor_locations.insert((r.component, loc.as_str()));
                }
            }
        }
        let mut conductor_smooth = true;
        let mut canonical_off = true;
        for (ci, comp) in self.components.iter().enumerate() {
            for sp in &comp.singular_points {
                let smooth = sp.graph.contracts_to_smooth_point();
                if conductor_locations.contains(&(ci, sp.location.as_str())) {
                    conductor_smooth &= smooth;
                } else {
                    canonical_off &= smooth || sp.graph.is_canonical();
                }
            }
        }
        DerivedFlags { normal: lk.conductor.is_empty(), nodal: locus.is_nodal(), conductor_smooth, canonical_off }
    }

    /// Hypothesis flags for the threshold tables: derived from the data,
    /// with declared singularity flags allowed to weaken them.
    pub fn hypotheses(&self) -> Result<Hypotheses> {
        let locus = self.non_normal_locus()?;
        let (lk, _) = self.lookup();
        let derived = self.derive_flags(&lk, &locus);
        let d = &self.declared;
        Ok(Hypotheses {
            index: self.global_index,
            kd_squared: self.k_squared()?,
            component_kd_squares: self.component_squares()?,
            d_union_delta_nodal: derived.nodal,
            normal: derived.normal,
            conductor_smooth_normalization: d.conductor_smooth_normalization.unwrap_or(derived.conductor_smooth),
            canonical_off_conductor: d.canonical_off_conductor.unwrap_or(derived.canonical_off),
            semi_canonical: d.semi_canonical.unwrap_or(false),
        }
        .normalized())
    }

    /// The surface whose components are those of `self` and `other`.
    pub fn disjoint_union(&self, other: &StableLogSurface) -> StableLogSurface {
        let mut components = self.components.clone();
        components.extend(other.components.iter().cloned());
        let mut gluing = self.gluing.clone();
        gluing.pairing.extend(other.gluing.pairing.iter().cloned());
        gluing.point_map.extend(other.gluing.point_map.iter().cloned());
        StableLogSurface {
            components,
            gluing,
            global_index: self.global_index.lcm(&other.global_index),
            declared: DeclaredHypotheses::default(),
        }
    }
}

struct DerivedFlags {
    normal: bool,
    nodal: bool,
    conductor_smooth: bool,
    canonical_off: bool,
}

fn class_vector(comp: &NormalComponent, d: &QDivisor) -> Result<Vec<Rational>> {
    let mut v = vec![Rational::zero(); comp.classes.len()];
    for (name, c) in d.iter() {
        let i = comp
            .classes
            .iter()
            .position(|k| k == name)
            .ok_or_else(|| Error::UnknownName(format!("{name} on `{}`", comp.id)))?;
        v[i] = c.clone();
    }
    if comp.form.rows() != v.len() || comp.form.cols() != v.len() {
        return Err(Error::InvalidArgument(format!("intersection form of `{}` has the wrong size", comp.id)));
    }
    Ok(v)
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    /// Keeps the smaller root so class representatives are the least member.
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.parent[hi] = lo;
        }
    }
}
