use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// A line of an input file could not be parsed.
    #[error("{origin}:{line}: {message}")]
    Parse {
        origin: String,
        line: usize,
        message: String,
    },

    /// A label string is not one of the six design-pattern names.
    #[error("unknown design pattern label `{0}`")]
    UnknownLabel(String),

    /// A domain invariant was violated.
    #[error("{0}")]
    Validation(String),

    /// Vector/matrix sizes do not line up.
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    /// Binary training data contains only one class.
    #[error("degenerate labels: {0}")]
    DegenerateLabels(String),

    /// A token was looked up that the table does not contain.
    #[error("unknown token `{0}`")]
    UnknownToken(String),

    /// A feature configuration needs an artifact that was not supplied.
    #[error("missing artifact: {0}")]
    MissingArtifact(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(origin: &str, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            origin: origin.to_string(),
            line,
            message: message.into(),
        }
    }

    pub(crate) fn validation(message: impl Into<String>) -> Self {
        Error::Validation(message.into())
    }
}
