//! Error type shared across the crate.

use thiserror::Error;

/// Everything that can go wrong, sorted by contract kind.
///
/// `Integrity` is reserved for situations where an internal invariant that the
/// algorithms guarantee (e.g. entries staying in {-1, 0, 1} during a safe row
/// combination) is observed to fail; it signals bad input to a precondition
/// that cannot be checked cheaply up front, and maps to a distinct process
/// exit code in the CLI.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("state error: {0}")]
    State(String),
    #[error("unknown element: {0}")]
    Lookup(String),
    #[error("consistency error: {0}")]
    Consistency(String),
    #[error("integrity error: {0}")]
    Integrity(String),
    #[error("schema error: {0}")]
    Schema(String),
}

impl Error {
    /// CLI exit code: 2 for integrity violations, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Integrity(_) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
