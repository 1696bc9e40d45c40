use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix dimensions do not agree: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("matrix data is malformed: {0}")]
    Malformed(String),

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("matrix is not symmetric (asymmetry {asymmetry:e}, tolerance {tolerance:e})")]
    NotSymmetric { asymmetry: f64, tolerance: f64 },

    #[error("Jacobi iteration did not converge in {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("matrix is singular or numerically singular")]
    SingularInput,

    #[error("matrix has non-positive determinant {0:e}")]
    NegativeDeterminant(f64),

    #[error("matrix is not symmetric positive-definite")]
    NotSpd,

    #[error("invalid metric parameters: {0}")]
    InvalidMetric(String),

    #[error("path midpoint {segment} is singular (|det| = {det:e}); refine the path")]
    MidpointSingular { segment: usize, det: f64 },

    #[error("sampling scheme does not support dimension {0}")]
    UnsupportedDimension(usize),

    #[error("exponent {0} exceeds the overflow guard")]
    Overflow(u32),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Short machine-readable code, stable across releases.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DimensionMismatch(..) => "dimension_mismatch",
            Error::Malformed(_) => "malformed",
            Error::NonFinite => "non_finite",
            Error::NotSymmetric { .. } => "not_symmetric",
            Error::NoConvergence { .. } => "no_convergence",
            Error::SingularInput => "singular_input",
            Error::NegativeDeterminant(_) => "negative_determinant",
            Error::NotSpd => "not_spd",
            Error::InvalidMetric(_) => "invalid_metric",
            Error::MidpointSingular { .. } => "midpoint_singular",
            Error::UnsupportedDimension(_) => "unsupported_dimension",
            Error::Overflow(_) => "overflow",
            Error::InvalidArgument(_) => "invalid_argument",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
