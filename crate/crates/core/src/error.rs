use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("singular regime: theta = {theta} must be strictly below hbar = {hbar}")]
    SingularRegime { hbar: f64, theta: f64 },

    #[error("invalid cutoff {cutoff}: {reason}")]
    InvalidCutoff { cutoff: usize, reason: String },

    #[error("label ({m},{n}) out of range for window {limit}")]
    LabelOutOfRange { m: usize, n: usize, limit: usize },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operator is not Hermitian (defect {defect:e})")]
    NotHermitian { defect: f64 },

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("degenerate pair: both states are |{m},{n}>")]
    DegeneratePair { m: usize, n: usize },

    #[error("element commutes with the Dirac operator; it cannot be scaled onto the ball")]
    ZeroElement,

    #[error("solver did not converge after {iterations} iterations (gap {gap:e})")]
    NotConverged { iterations: usize, gap: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
