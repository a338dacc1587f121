use std::path::PathBuf;

use thiserror::Error;

use crate::instances::Violation;

#[derive(Debug, Error)]
pub enum Error {
    /// Bad caller input: out-of-range identifiers, malformed shapes, infeasible parameters.
    #[error("input error: {0}")]
    Input(String),

    /// A value falls outside the representable range (e.g. an edge exponent above the cap).
    #[error("range error: {0}")]
    Range(String),

    #[error("instance has {} violation(s): {}", .0.len(), join_violations(.0))]
    Invalid(Vec<Violation>),

    #[error("parse error in {path}: {message}")]
    Parse { path: String, message: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// Something the algorithms guarantee cannot happen did happen.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

fn join_violations(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
