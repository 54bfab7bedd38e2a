//! Front end for `slcsurf`: the JSON document format, built-in examples,
//! the graded ring calculator and report rendering.

pub mod commands;
pub mod document;
pub mod examples;
pub mod report;
pub mod ring;

use thiserror::Error;

pub use document::SurfaceDocument;
pub use report::Report;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("cannot read `{path}`: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("unknown example `{0}` (expected descend, largeK2:<k> or multinode3)")]
    UnknownExample(String),
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error(transparent)]
    Core(#[from] slcsurf_core::Error),
}

impl CliError {
    /// Stable process exit code: 2 input, 3 validation, 4 computation cap.
    pub fn exit_code(&self) -> i32 {
        use slcsurf_core::Error as E;
        match self {
            CliError::Parse(_) | CliError::Io { .. } | CliError::UnknownExample(_) | CliError::Argument(_) => 2,
            CliError::Core(E::ParseRational(_)) => 2,
            CliError::Core(E::NonTermination { .. } | E::TooManyComponents { .. }) => 4,
            CliError::Core(_) => 3,
        }
    }
}
