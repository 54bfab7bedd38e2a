//! JSON documents for surfaces and graphs.
//!
//! Rational quantities are strings `"p/q"` (or `"p"`), so files never pass
//! through binary floating point. Counts such as `chi`, genera and the index
//! are JSON integers. Unknown keys are rejected everywhere.

use std::collections::BTreeMap;
use std::fmt;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};
use slcsurf_core::divisor::format_rational;
use slcsurf_core::graph::GraphBuilder;
use slcsurf_core::surface::{
    Curve, DeclaredHypotheses, GluingInvolution, MarkedPoint, NormalComponent, SingularPoint,
};
use slcsurf_core::{parse_rational, ExceptionalGraph, Matrix, QDivisor, Rational, StableLogSurface};

use crate::CliError;

/// An exact rational written as a `"p/q"` string.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Q(pub Rational);

impl Serialize for Q {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for Q {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Q;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a rational number as a string \"p/q\"")
            }
            fn visit_str<E: de::Error>(self, s: &str) -> Result<Q, E> {
                parse_rational(s).map(Q).map_err(E::custom)
            }
        }
        d.deserialize_str(V)
    }
}

fn divisor_doc(d: &QDivisor) -> BTreeMap<String, Q> {
    d.iter().map(|(k, v)| (k.to_string(), Q(v.clone()))).collect()
}

fn divisor_from(d: &BTreeMap<String, Q>) -> QDivisor {
    QDivisor::from_terms(d.iter().map(|(k, v)| (k.clone(), v.0.clone())))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexDoc {
    pub id: String,
    pub self_intersection: i64,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub genus: u32,
}

fn is_zero(g: &u32) -> bool {
    *g == 0
}

/// A weighted dual graph. `edges` lists one pair per intersection point;
/// `marks` counts boundary branches per vertex; `incidence` gives the
/// intersection numbers of a strict transform with each vertex.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDoc {
    pub vertices: Vec<VertexDoc>,
    #[serde(default)]
    pub edges: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub marks: BTreeMap<String, u32>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub incidence: BTreeMap<String, u64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub labels: BTreeMap<String, Q>,
}

impl GraphDoc {
    pub fn to_graph(&self) -> Result<ExceptionalGraph, CliError> {
        let mut b = GraphBuilder::default();
        for v in &self.vertices {
            b = b.vertex_with_genus(v.id.clone(), v.self_intersection, v.genus);
        }
        for (x, y) in &self.edges {
            b = b.edge(x.clone(), y.clone());
        }
        for (id, &n) in &self.marks {
            b = b.marks(id.clone(), n);
        }
        for (id, q) in &self.labels {
            b = b.label(id.clone(), q.0.clone());
        }
        Ok(b.build()?)
    }

    pub fn from_graph(g: &ExceptionalGraph) -> Self {
        let ids: Vec<String> = g.ids().map(str::to_string).collect();
        let mut edges = Vec::new();
        for (i, j, mult) in g.edges() {
            for _ in 0..mult {
                edges.push((ids[i].clone(), ids[j].clone()));
            }
        }
        let labels = ids
            .iter()
            .filter_map(|id| g.label(id).ok().flatten().map(|l| (id.clone(), Q(l.clone()))))
            .collect();
        GraphDoc {
            vertices: g
                .vertices()
                .iter()
                .map(|v| VertexDoc { id: v.id.clone(), self_intersection: v.self_intersection, genus: v.genus })
                .collect(),
            edges,
            marks: ids.iter().zip(g.marks()).filter(|(_, &m)| m > 0).map(|(id, &m)| (id.clone(), m)).collect(),
            incidence: BTreeMap::new(),
            labels,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointDoc {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub different: Option<Q>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub node_partner: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub location: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveDoc {
    pub name: String,
    pub class: BTreeMap<String, Q>,
    #[serde(default)]
    pub genus: u32,
    #[serde(default)]
    pub points: Vec<PointDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SingularPointDoc {
    pub location: String,
    pub graph: GraphDoc,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentDoc {
    pub id: String,
    pub chi: i64,
    pub classes: Vec<String>,
    pub form: Vec<Vec<Q>>,
    pub canonical: BTreeMap<String, Q>,
    #[serde(default)]
    pub curves: Vec<CurveDoc>,
    #[serde(default)]
    pub conductor: Vec<String>,
    #[serde(default)]
    pub boundary: Vec<String>,
    #[serde(default)]
    pub singular_points: Vec<SingularPointDoc>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GluingDoc {
    #[serde(default)]
    pub pairing: Vec<(String, String)>,
    #[serde(default)]
    pub point_map: Vec<(String, String)>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HypothesesDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normal: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_union_delta_nodal: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conductor_smooth_normalization: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub canonical_off_conductor: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub semi_canonical: Option<bool>,
}

impl HypothesesDoc {
    fn is_empty(&self) -> bool {
        self == &HypothesesDoc::default()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceDocument {
    pub index: u32,
    pub components: Vec<ComponentDoc>,
    #[serde(default)]
    pub gluing: GluingDoc,
    #[serde(default, skip_serializing_if = "HypothesesDoc::is_empty")]
    pub hypotheses: HypothesesDoc,
}

impl SurfaceDocument {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialise")
    }

    pub fn to_surface(&self) -> Result<StableLogSurface, CliError> {
        let mut components = Vec::new();
        for c in &self.components {
            let form = Matrix::new(c.form.iter().map(|r| r.iter().map(|q| q.0.clone()).collect()).collect())?;
            let mut singular_points = Vec::new();
            for sp in &c.singular_points {
                singular_points.push(SingularPoint { location: sp.location.clone(), graph: sp.graph.to_graph()? });
            }
            components.push(NormalComponent {
                id: c.id.clone(),
                chi: c.chi,
                classes: c.classes.clone(),
                form,
                canonical: divisor_from(&c.canonical),
                curves: c
                    .curves
                    .iter()
                    .map(|cd| Curve {
                        name: cd.name.clone(),
                        class: divisor_from(&cd.class),
                        genus: cd.genus,
                        points: cd
                            .points
                            .iter()
                            .map(|p| MarkedPoint {
                                id: p.id.clone(),
                                different: p.different.as_ref().map(|q| q.0.clone()),
                                node_partner: p.node_partner.clone(),
                                location: p.location.clone(),
                            })
                            .collect(),
                    })
                    .collect(),
                conductor: c.conductor.clone(),
                boundary: c.boundary.clone(),
                singular_points,
            });
        }
        let h = &self.hypotheses;
        Ok(StableLogSurface {
            components,
            gluing: GluingInvolution { pairing: self.gluing.pairing.clone(), point_map: self.gluing.point_map.clone() },
            global_index: self.index,
            declared: DeclaredHypotheses {
                normal: h.normal,
                d_union_delta_nodal: h.d_union_delta_nodal,
                conductor_smooth_normalization: h.conductor_smooth_normalization,
                canonical_off_conductor: h.canonical_off_conductor,
                semi_canonical: h.semi_canonical,
            },
        })
    }

    pub fn from_surface(s: &StableLogSurface) -> Self {
        let components = s
            .components
            .iter()
            .map(|c| ComponentDoc {
                id: c.id.clone(),
                chi: c.chi,
                classes: c.classes.clone(),
                form: (0..c.form.rows()).map(|i| c.form.row(i).iter().map(|x| Q(x.clone())).collect()).collect(),
                canonical: divisor_doc(&c.canonical),
                curves: c
                    .curves
                    .iter()
                    .map(|cv| CurveDoc {
                        name: cv.name.clone(),
                        class: divisor_doc(&cv.class),
                        genus: cv.genus,
                        points: cv
                            .points
                            .iter()
                            .map(|p| PointDoc {
                                id: p.id.clone(),
                                different: p.different.clone().map(Q),
                                node_partner: p.node_partner.clone(),
                                location: p.location.clone(),
                            })
                            .collect(),
                    })
                    .collect(),
                conductor: c.conductor.clone(),
                boundary: c.boundary.clone(),
                singular_points: c
                    .singular_points
                    .iter()
                    .map(|sp| SingularPointDoc { location: sp.location.clone(), graph: GraphDoc::from_graph(&sp.graph) })
                    .collect(),
            })
            .collect();
        let d = &s.declared;
        SurfaceDocument {
            index: s.global_index,
            components,
            gluing: GluingDoc { pairing: s.gluing.pairing.clone(), point_map: s.gluing.point_map.clone() },
            hypotheses: HypothesesDoc {
                normal: d.normal,
                d_union_delta_nodal: d.d_union_delta_nodal,
                conductor_smooth_normalization: d.conductor_smooth_normalization,
                canonical_off_conductor: d.canonical_off_conductor,
                semi_canonical: d.semi_canonical,
            },
        }
    }
}

pub fn parse_graph(text: &str) -> Result<GraphDoc, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
}
