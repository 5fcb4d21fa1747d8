use thiserror::Error;

/// Errors shared by every module in the crate. The CLI maps these onto
/// process exit codes, so the variant split mirrors that contract:
/// invalid input (1), infeasible (2), unsupported size or width (3),
/// internal assertion (4).
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("resource budget exceeded: {0}")]
    ResourceExhausted(String),

    #[error("internal error: {0}")]
    Internal(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Exit code the CLI reports for this error.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::InvalidInput(_) | Error::Io(_) | Error::Json(_) => 1,
            Error::Infeasible(_) => 2,
            Error::Unsupported(_) | Error::ResourceExhausted(_) => 3,
            Error::Internal(_) => 4,
        }
    }
}
