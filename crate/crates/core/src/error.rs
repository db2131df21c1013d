use thiserror::Error;

/// Errors produced by the matrix calculus, the function catalog and the checkers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix must have dimension at least 1")]
    EmptyMatrix,

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian: max |a_ij - conj(a_ji)| = {0:.3e}")]
    NotHermitian(f64),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("eigendecomposition did not converge after {sweeps} sweeps (off-diagonal residual {residual:.3e})")]
    NoConvergence { sweeps: usize, residual: f64 },

    #[error("argument {0} is outside the domain (0, inf)")]
    Domain(f64),

    #[error("eigenvalue {0} is not positive")]
    NonPositiveEigenvalue(f64),

    #[error("Loewner entry {0:.3e} is below the invertibility threshold; f is not strictly increasing here")]
    NearSingularDifferential(f64),

    #[error("kernel is degenerate for an affine function")]
    DegenerateKernel,

    #[error("function is not strictly increasing: {0}")]
    NotIncreasing(String),

    #[error("zero-limit sequence does not stabilize: {0}")]
    Unstable(String),

    #[error("too many skipped trials: {skipped} of {trials}")]
    TooManySkips { skipped: usize, trials: usize },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
