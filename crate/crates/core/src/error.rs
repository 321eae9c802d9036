use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("zero quaternion has no inverse")]
    ZeroInverse,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("odd dimension {rows}x{cols}: a quaternion embedding has even rows and columns")]
    OddDimension { rows: usize, cols: usize },

    #[error("structure violation: block symmetry residual {residual:e} exceeds tolerance {tolerance:e}")]
    StructureViolation { residual: f64, tolerance: f64 },

    #[error("invalid blocking config: {0}")]
    InvalidConfig(String),

    #[error("empty tuning space")]
    EmptySpace,

    #[error("invalid matrix file: {0}")]
    Format(String),

    #[error("invalid tuned config: {0}")]
    Config(String),

    #[error("checksum mismatch at n = {n}: {first} = {first_sum:e}, {second} = {second_sum:e}")]
    ChecksumMismatch { n: usize, first: String, first_sum: f64, second: String, second_sum: f64 },

    #[error("verification failed at n = {n}: {check} deviation {deviation:e} at element ({row}, {col}) exceeds {tolerance:e}")]
    VerificationFailed { n: usize, check: &'static str, row: usize, col: usize, deviation: f64, tolerance: f64 },

    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
