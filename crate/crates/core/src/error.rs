use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("walsh sum of intervals at different scales ({left} vs {right})")]
    ScaleMismatch { left: u32, right: u32 },

    #[error("invalid Lebesgue exponent {0}: must satisfy p >= 1")]
    InvalidExponent(f64),

    #[error("Hoelder exponents do not satisfy sum 1/p_i = 1 (got {sum})")]
    HoelderScaling { sum: f64 },

    #[error("function {index} is identically zero; normalization undefined")]
    ZeroFunction { index: usize },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("coefficient {value} at scale {scale} exceeds 1 in absolute value")]
    CoefficientOutOfRange { scale: u32, value: f64 },

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("{path}: line {line}, field '{field}': {message}")]
    RecordParse {
        path: PathBuf,
        line: usize,
        field: String,
        message: String,
    },

    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
