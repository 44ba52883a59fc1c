use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid exponent p = {0}: the space needs 1 < p < inf")]
    InvalidExponent(f64),
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("coordinates must be finite")]
    NonFinite,
    #[error("set is empty")]
    EmptySet,
    #[error("direction must be nonzero")]
    ZeroDirection,
    #[error("point is not in the set")]
    NotInSet,
    #[error("point is outside the domain of the operator")]
    OutsideDomain,
    #[error("M + M^T is not positive semidefinite (smallest eigenvalue {0:e})")]
    NotMonotone(f64),
    #[error("invalid operator: {0}")]
    InvalidOperator(String),
    #[error("solver did not converge after {iterations} iterations (best residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("lambda must be positive, got {0}")]
    NonPositiveLambda(f64),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("domain of the operator has empty interior")]
    EmptyInterior,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
