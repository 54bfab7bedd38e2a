use thiserror::Error;

use crate::graph::GraphType;
use crate::surface::Violation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("intersection form is not negative definite")]
    NotNegativeDefinite,
    #[error("linear system is singular")]
    SingularSystem,
    #[error("graph is not connected")]
    Disconnected,
    #[error("cycle iteration exceeded the coefficient cap {cap}")]
    NonTermination { cap: u64 },
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("graph has boundary marks; use the semi-numerical cycle instead")]
    BoundaryMarksPresent,
    #[error("no different is defined for graph type {0}")]
    Unclassified(GraphType),
    #[error("supports do not match the graph: {0}")]
    GraphMismatch(String),
    #[error("genus {genus} with {fixed_points} fixed points is not a double cover")]
    InconsistentRamification { genus: u32, fixed_points: u32 },
    #[error("invalid normalisation triple: {}", join_violations(.0))]
    InvalidTriple(Vec<Violation>),
    #[error("subcurve is empty")]
    EmptySubcurve,
    #[error("curve has {count} components, the subcurve cap is {cap}")]
    TooManyComponents { count: usize, cap: usize },
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("degree {0} is below the range with known behaviour")]
    DegreeTooSmall(i64),
    #[error("degree on `{0}` is not an integer")]
    NonIntegralDegree(String),
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("invalid rational `{0}`")]
    ParseRational(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}
