use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("degenerate data: {0}")]
    DegenerateData(String),

    #[error("parse error at row {row}, column {column}: {message}")]
    Parse {
        row: usize,
        column: usize,
        message: String,
    },

    #[error("i/o error: {0}")]
    Io(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("density estimation failed: {0}")]
    Estimation(String),

    #[error("sampler initialization failed: {0}")]
    Initialization(String),

    #[error("configuration error: {0}")]
    Configuration(String),

    #[error(
        "quadrature did not converge: estimate {estimate:e}, error {abs_error:e} after {intervals} subintervals"
    )]
    Quadrature {
        estimate: f64,
        abs_error: f64,
        intervals: usize,
    },
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }
}
