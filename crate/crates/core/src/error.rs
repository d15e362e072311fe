use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("vertex {0} is isolated; the transition matrix is undefined for degree 0")]
    IsolatedVertex(usize),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: String, got: String },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix has non-finite entries")]
    NonFinite,

    #[error("hermiticity violated: max |a - a^dagger| = {violation:e}")]
    NotHermitian { violation: f64 },

    #[error("trace violated: |tr - 1| = {deviation:e}")]
    Trace { deviation: f64 },

    #[error("positivity violated: min eigenvalue = {min_eigenvalue:e}")]
    NotPositive { min_eigenvalue: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("integrator step size underflow at t = {t}")]
    StepUnderflow { t: f64 },

    #[error(
        "generator kernel is empty (smallest singular value {smallest_singular_value:e}); \
         inconsistent with trace preservation"
    )]
    EmptyKernel { smallest_singular_value: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
