use thiserror::Error;

/// Errors reported by the exact-map operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed rational `{0}`")]
    ParseRat(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0}")]
    OutOfRange(String),
    #[error("invalid piecewise-linear map: {0}")]
    InvalidMap(String),
    #[error("map is not unimodal")]
    NotUnimodal,
    #[error("flat branch: {0}")]
    FlatBranch(String),
    #[error("{0}")]
    Validation(String),
    #[error("no stabilization: {0}")]
    NoStabilization(String),
    #[error("degenerate interval: {0}")]
    Degenerate(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}
