//! Exact intersection theory and bound tables for stable log surfaces.
//!
//! A stable log surface is described through its normalisation: normal
//! components carrying a lattice of curve classes, a conductor divisor, and
//! an involution on the normalised conductor. Everything here is computed
//! with arbitrary-precision rationals.
//!
//! * [`graph`]: weighted dual graphs of exceptional curves with intersection
//!   matrices, definiteness, numerical pullback, codiscrepancy and the
//!   classification of the non-normal graph types.
//! * [`cycles`]: integral lattice cycles (semi-numerical cycle,
//!   fundamental cycle, hat transform) computed by increment iteration.
//! * [`surface`]: the normalisation data model, the multi-node structure of
//!   the non-normal locus and global invariants.
//! * [`curves`]: multi-nodal curves, arithmetic genera, subcurves and
//!   degree bounds.
//! * [`criteria`]: the embedding criterion on curves and the threshold
//!   tables for base-point-freeness, very ampleness and ring generation.

pub mod criteria;
pub mod curves;
pub mod cycles;
pub mod divisor;
mod error;
pub mod graph;
pub mod linalg;
pub mod surface;

pub use criteria::{CfhrVerdict, Hypotheses, Property, Verdict};
pub use curves::{MultiNodalCurve, PolarizedCurve, Subcurve};
pub use cycles::LatticeCycle;
pub use divisor::{parse_rational, QDivisor, Rational};
pub use error::{Error, Result};
pub use graph::{ExceptionalGraph, GraphType};
pub use linalg::Matrix;
pub use surface::{NonNormalLocusReport, StableLogSurface, SurfaceInvariants};
