use thiserror::Error;

/// Errors raised by the rotation and polarization routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Malformed or out-of-range input (non-finite numbers, wrong norm, bad matrix).
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// The input is well formed but lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A caller broke an API contract, e.g. passed a three-element pattern
    /// to the two-element factorizer.
    #[error("contract violation: {0}")]
    Contract(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
