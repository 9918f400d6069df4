//! Crate-wide error taxonomy.
//!
//! Every fallible operation in the crate returns [`Result`]. Variants are
//! grouped by what went wrong rather than where, so callers (and the CLI exit
//! code mapping) can branch on the kind of failure without string matching.

use thiserror::Error;

/// Unified error type for the whole crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Two operands disagreed on dimensions (vector lengths, matrix shapes).
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A NaN or infinity reached a kernel that requires finite input.
    #[error("non-finite value: {0}")]
    NonFinite(String),

    /// A numeric procedure failed (singular pivot, no convergence, negative
    /// quantity that should be nonnegative beyond tolerance).
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// A model violated its semantic contract (probabilities, reward range).
    #[error("model validation failed: {0}")]
    Validation(String),

    /// A byte stream did not parse as the format it claims to be.
    #[error("format error: {0}")]
    Format(String),

    /// A configuration value is missing, unknown, or out of range.
    #[error("config error: {0}")]
    Config(String),

    /// An underlying I/O operation failed.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code for the CLI: config errors map to 2, validation to 3,
    /// and I/O or format problems to 4. Everything else is an internal failure
    /// and also maps to 4 so scripts can treat it as an environment fault.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Config(_) => 2,
            Error::Validation(_) => 3,
            Error::Io(_) | Error::Format(_) => 4,
            Error::DimensionMismatch(_) | Error::NonFinite(_) | Error::Numerical(_) => 4,
        }
    }
}
