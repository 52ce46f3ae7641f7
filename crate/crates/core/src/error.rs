use thiserror::Error;

/// Failure modes shared by every operation in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// The request would exceed a configured sieve or memory budget.
    #[error("resource limit: {what} = {requested} exceeds budget {budget}")]
    ResourceLimit {
        what: &'static str,
        requested: u128,
        budget: u128,
    },
    /// Input failed structural validation (malformed set, table, or parameter).
    #[error("validation error: {0}")]
    Validation(String),
    /// The question cannot be decided from the available metadata.
    #[error("undecidable: {0}")]
    Undecidable(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn validation(msg: impl Into<String>) -> Error {
    Error::Validation(msg.into())
}
