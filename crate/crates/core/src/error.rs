use thiserror::Error;

/// Errors produced by the solver library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported derivative order {0} (extended cubic B-splines are only C2)")]
    UnsupportedDerivative(u8),

    #[error("singular or ill-conditioned system: pivot {pivot:e} at row {row} is below the floor {floor:e}")]
    Singular { row: usize, pivot: f64, floor: f64 },

    #[error("linear solve residual {residual:e} exceeds {limit:e}")]
    Residual { residual: f64, limit: f64 },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("non-finite value in solution at t = {time}")]
    NonFinite { time: f64 },

    #[error("unknown preset '{0}' (expected one of: pulse, kink, generation)")]
    UnknownPreset(String),

    #[error("objective requires an exact solution, but preset '{0}' has none")]
    UnsupportedObjective(String),

    #[error("initial value of {0} is zero; relative change is undefined")]
    ZeroInitialQuantity(&'static str),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// True for failures of the numerical pipeline (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Singular { .. } | Error::Residual { .. } | Error::NonFinite { .. }
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
