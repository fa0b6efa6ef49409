use std::path::PathBuf;

use thiserror::Error;

use crate::linop::Shape;

/// Errors raised by the solver library and the experiment harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected:?}, got {got:?}")]
    Dimension { expected: Shape, got: Shape },

    #[error("empty or zero-dimensional operand")]
    ZeroDimension,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("brute-force prox oracle found no finite value on its grid")]
    NoMinimizer,

    #[error("starting point is infeasible: primal-dual energy is +inf at (x0, y0)")]
    InvalidStart,

    #[error("criticality residual needs a previous iterate (n = 0)")]
    NotAvailable,

    #[error(
        "descent violated at step {step}: {stage} energy went from {before:.17e} to {after:.17e} \
         (allowed increase {allowed:.3e})"
    )]
    DescentViolation {
        step: usize,
        stage: &'static str,
        before: f64,
        after: f64,
        allowed: f64,
    },

    #[error("trajectory too short: need at least {needed} records, have {have}")]
    TooShort { needed: usize, have: usize },

    #[error("malformed CSV {path}: {reason}")]
    MalformedCsv { path: PathBuf, reason: String },

    #[error("config error: {0}")]
    Config(String),

    #[error("image format error: {0}")]
    ImageFormat(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
