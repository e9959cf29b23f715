//! Crate-wide error type.

use thiserror::Error;

/// Errors raised by the numerical routines, loaders and the pipeline.
#[derive(Debug, Error)]
pub enum Error {
    /// Input is structurally valid but numerically degenerate
    /// (too few rows, identical samples, zero width, ...).
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// A documented precondition on the arguments was violated.
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("column {column} has zero variance")]
    ZeroVariance { column: usize },

    #[error("covariance is rank deficient (condition number {condition:.3e}); reduce dimension with PCA first")]
    RankDeficient { condition: f64 },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("{what} out of range: {detail}")]
    OutOfRange { what: &'static str, detail: String },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: u64,
        column: usize,
        message: String,
    },

    #[error("empty result: {0}")]
    Empty(String),

    #[error("{count} cell id(s) missing from label table: {}", .shown.join(", "))]
    MissingLabels { count: usize, shown: Vec<String> },

    #[error("optimizer failed at restart {restart}, iteration {iteration}: {source}")]
    Optimizer {
        restart: usize,
        iteration: usize,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code used by the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } | Error::MissingLabels { .. } => 2,
            Error::Empty(_) => 3,
            Error::Optimizer { .. } => 5,
            Error::Io(_) => 2,
            _ => 4,
        }
    }
}
