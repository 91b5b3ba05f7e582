use thiserror::Error;

/// Errors raised by the library. Each variant maps onto one CLI exit code.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed request: bad arguments, out-of-range labels, dimension mismatch.
    #[error("usage error: {0}")]
    Usage(String),

    /// Input that parses but violates a mathematical precondition.
    #[error("validation error: {0}")]
    Validation(String),

    /// The requested quantity needs data the caller did not supply.
    #[error("insufficient invariants: missing {field} ({context})")]
    Insufficient { field: String, context: String },

    /// An invariant that must hold by construction was observed to fail.
    #[error("internal assertion failed: {0}")]
    Internal(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) | Error::Io(_) => 1,
            Error::Validation(_) | Error::Insufficient { .. } | Error::Json(_) => 2,
            Error::Internal(_) => 3,
        }
    }

    pub(crate) fn insufficient(field: &str, context: impl Into<String>) -> Self {
        Error::Insufficient {
            field: field.to_string(),
            context: context.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
