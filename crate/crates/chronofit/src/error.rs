//! Crate-wide error type and result alias.

use thiserror::Error;

/// Errors produced by curve, metric, and dataset operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Malformed argument: wrong lengths, non-finite values, bad combinations.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Input outside the supported domain (for example sub-minute times).
    #[error("domain error: {0}")]
    Domain(String),

    /// Numerical failure: degenerate normalization, non-finite intermediate.
    #[error("numeric error: {0}")]
    Numeric(String),

    /// Operation applied to a value whose current state forbids it.
    #[error("semantics error: {0}")]
    Semantics(String),

    /// Malformed data file; `line` is the 1-based line where loading failed.
    #[error("data error at line {line}: {message}")]
    Data { line: usize, message: String },

    /// Underlying I/O failure.
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
