use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// The operator (or potential) has no finite lower bound.
    #[error("not bounded below: {0}")]
    Unbounded(String),

    /// A bound exists in principle but the requested method does not apply.
    #[error("not applicable: {0}")]
    NotApplicable(String),

    /// Two quadrature orders disagreed beyond tolerance.
    #[error("quadrature did not converge: {0}")]
    Convergence(String),

    #[error("invalid range: {0}")]
    InvalidRange(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
