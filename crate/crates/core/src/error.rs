use thiserror::Error;

/// Errors raised across state construction, measures, the roof oracle and the harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimensions: {0}")]
    InvalidDimensions(String),

    #[error("state is not normalized (squared norm {0})")]
    NotNormalized(f64),

    #[error("basis tuple {tuple:?} out of range for dims {dims:?}")]
    TupleOutOfRange { tuple: Vec<usize>, dims: Vec<usize> },

    #[error("invalid party selection: {0}")]
    InvalidParties(String),

    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:e})")]
    NotPsd(f64),

    #[error("trace is not 1 (got {0})")]
    InvalidTrace(f64),

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("q = {q} is outside the {window} window; enable exploratory mode to evaluate it")]
    QOutOfRange { q: f64, window: &'static str },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("matrix is not an isometry (deviation {0:e})")]
    NotIsometry(f64),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
