use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Input violates a documented precondition.
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// An iterative or adaptive scheme did not reach its tolerance.
    #[error("no convergence in {what}: estimate {estimate:e} above tolerance {tolerance:e}")]
    NonConvergence {
        what: String,
        estimate: f64,
        tolerance: f64,
    },
    /// Two measures that must carry equal mass do not.
    #[error("mass mismatch: {source_mass} vs {target_mass}")]
    MassMismatch { source_mass: f64, target_mass: f64 },
    /// A numerically checked inequality failed.
    #[error("{check} violated at {case}: slack {slack:e}")]
    Violation {
        check: String,
        case: String,
        slack: f64,
    },
    /// Malformed serialized input.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn precondition(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}
