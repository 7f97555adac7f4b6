use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("null state: amplitude vector has zero norm")]
    NullState,

    #[error("state is not normalized (norm² = {0})")]
    NotNormalized(f64),

    #[error("invalid local dimensions: {0}")]
    InvalidDims(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid party selection: {0}")]
    InvalidParties(String),

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("not a valid density operator: {0}")]
    InvalidDensity(String),

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("regime error: {0}")]
    Regime(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("state file: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
