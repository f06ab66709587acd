use thiserror::Error;

/// Failure modes shared by all modules.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("pole of {0}")]
    Pole(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("matrix error: {0}")]
    Matrix(String),
    #[error("singular parameter: {0}")]
    Singular(String),
    #[error("accuracy error: {0}")]
    Accuracy(String),
    #[error("not found: {0}")]
    NotFound(String),
    #[error("construction failed: {0}")]
    Construction(String),
    #[error("consistency check failed: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
