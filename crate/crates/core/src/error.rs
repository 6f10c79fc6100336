use thiserror::Error;

/// Failures surfaced by the numeric routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An input lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// More decimal digits were requested than the value (or the
    /// implementation) can deliver reliably.
    #[error(
        "precision ceiling exceeded: requested {requested} digits, at most {max} are reliable"
    )]
    PrecisionCeiling { requested: u64, max: u64 },

    /// An iteration failed to settle within its iteration budget.
    #[error("no convergence after {iterations} iterations: {what}")]
    NoConvergence { what: String, iterations: u32 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
