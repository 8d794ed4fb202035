use thiserror::Error;

/// Errors raised by the state constructors and special functions.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A ratio of coefficients was requested where the denominator vanishes.
    #[error("division by zero: {0}")]
    DivisionByZero(String),

    /// A nonlinear function evaluated to zero where it is used as a divisor.
    #[error("zero divisor: G({index}) = 0")]
    ZeroDivisor { index: usize },

    /// A nonlinear function evaluated to a non-finite value at an occupied level.
    #[error("non-finite value {value} at level {index}")]
    NonFinite { index: usize, value: f64 },

    /// The retained basis is too small for the requested state.
    #[error("truncation: {0}")]
    Truncation(String),

    /// An operator series failed to converge within its term budget.
    #[error("series did not converge after {terms} terms")]
    Convergence { terms: usize },

    /// A realization tag does not match the Bargmann index of the state.
    #[error("index mismatch: state has k = {state_k}, realization requires k = {tag_k}")]
    IndexMismatch { state_k: f64, tag_k: f64 },

    /// Inconsistent derived parameters.
    #[error("parameter error: {0}")]
    Parameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
