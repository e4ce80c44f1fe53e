use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the solvers, oracles and experiment harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("greedy did not reach the target value within {max_steps} steps (f = {reached}, target = {target})")]
    StepLimitExceeded {
        max_steps: usize,
        reached: f64,
        target: f64,
    },

    #[error("final bin index {requested} exceeds the population cap {cap}")]
    Overflow { requested: u64, cap: u64 },

    #[error("no subset reaches the threshold (f(S) = {max_value}, tau = {tau})")]
    Infeasible { max_value: f64, tau: f64 },

    #[error("{what} is {size}, exhaustive enumeration is limited to {limit}")]
    BudgetExceeded {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("graph has no vertices and no edges")]
    EmptyGraph,

    #[error("schema error in field `{field}`: {message}")]
    Schema { field: String, message: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("rr-set cache {path}: {message}")]
    Cache { path: PathBuf, message: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn schema(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema {
            field: field.into(),
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
