use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("need at least {needed} observations, got {got}")]
    TooFewObservations { needed: usize, got: usize },

    #[error("observation {index} is not finite ({value})")]
    NonFinite { index: usize, value: f64 },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("root not bracketed on [{lo}, {hi}]")]
    NotBracketed { lo: f64, hi: f64 },

    #[error("quadrature did not converge (error estimate {estimate:e} after {intervals} subintervals)")]
    QuadratureDidNotConverge { estimate: f64, intervals: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Coarse failure class, used for process exit codes and FFI status values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Usage,
    Data,
    Numerical,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::InvalidParameter(_) => ErrorClass::Usage,
            Error::TooFewObservations { .. }
            | Error::NonFinite { .. }
            | Error::LengthMismatch { .. }
            | Error::Parse { .. }
            | Error::Io(_) => ErrorClass::Data,
            Error::NotBracketed { .. } | Error::QuadratureDidNotConverge { .. } => ErrorClass::Numerical,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
