use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument fell outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// An iterative routine did not reach its tolerance within budget.
    #[error("did not converge: {0}")]
    NonConvergence(String),
    /// A prior failed validation.
    #[error("invalid prior: {0}")]
    InvalidPrior(String),
    /// A prior specification document could not be parsed.
    #[error("prior spec: {0}")]
    PriorSpec(String),
    /// The observed data are impossible under every prior component.
    #[error("impossible data: {0}")]
    ImpossibleData(String),
}

pub type Result<T> = std::result::Result<T, Error>;
