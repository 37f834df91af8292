use thiserror::Error;

/// Errors raised by the numeric, algebra, module and field layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not hermitian: deviation {deviation:e} exceeds tolerance {tol:e}")]
    NotHermitian { deviation: f64, tol: f64 },
    #[error("eigenvalue iteration did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("eigenvalue {eigenvalue} lies outside the function domain [{lo}, {hi}]")]
    DomainError { eigenvalue: f64, lo: f64, hi: f64 },
    #[error("eigenvalue {eigenvalue} is within {tol:e} of the threshold {eps}")]
    EigenvalueAtThreshold { eigenvalue: f64, eps: f64, tol: f64 },
    #[error("element is not a projection: {0}")]
    NotProjection(String),
    #[error("input must be nonzero")]
    ZeroInput,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid shape: {0}")]
    InvalidShape(String),
    #[error("value {0} lies outside [0, 1]")]
    OutOfRange(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("polynomial {poly} has an irrational root in ({lo}, {hi})")]
    IrrationalRoot { poly: String, lo: String, hi: String },
    #[error("generators do not span the fiber at x = {0}")]
    GeneratorsNotSpanning(String),
    #[error("no rational interval available for a witness: {0}")]
    NoRoom(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("sample {0} does not lie in the defect set")]
    SampleNotInDefect(String),
    #[error("no generator leaves the subspace at x = {0}")]
    NoGeneratorDefect(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
