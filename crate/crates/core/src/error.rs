use thiserror::Error;

/// Errors raised by state construction, measurement and verification routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("entry count {found} does not match shape (expected {expected})")]
    Shape { expected: usize, found: usize },

    #[error("non-finite component at index {0}")]
    NonFinite(usize),

    #[error("matrix is not unitary (max deviation of U^dagger U from I: {0:e})")]
    NotUnitary(f64),

    #[error("state vector is not normalized (norm^2 = {0})")]
    NotNormalized(f64),

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("invalid probability vector: {0}")]
    InvalidProbabilities(String),

    #[error("unsupported qubit count {0}")]
    UnsupportedQubits(usize),

    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),

    #[error("unknown state name `{0}`")]
    UnknownState(String),

    #[error("state `{name}` takes {expected} parameter(s), got {found}")]
    ParamCount {
        name: String,
        expected: usize,
        found: usize,
    },

    #[error("{name} = {value} is out of range")]
    OutOfRange { name: &'static str, value: f64 },

    #[error("not a complete set of mutually unbiased bases: {0}")]
    InvalidMubSet(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
