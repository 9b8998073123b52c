use thiserror::Error;

/// Failure modes shared by every layer of the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Exact division left a nonzero remainder (rendered as text).
    #[error("not divisible: remainder {remainder}")]
    Divisibility { remainder: String },

    #[error("invalid valuation data: {0}")]
    InvalidSpec(String),

    /// The supplied depth does not determine the requested quantity.
    #[error("insufficient depth: {context} (need depth at least {needed})")]
    InsufficientDepth { needed: usize, context: String },

    /// A term or step ceiling was hit.
    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),

    /// An identity that must hold did not; always a bug or corrupted input.
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn insufficient(needed: usize, context: impl Into<String>) -> Self {
        Error::InsufficientDepth {
            needed,
            context: context.into(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidArgument(_) => "invalid-argument",
            Error::Divisibility { .. } => "divisibility",
            Error::InvalidSpec(_) => "invalid-spec",
            Error::InsufficientDepth { .. } => "insufficient-depth",
            Error::Resource(_) => "resource",
            Error::Unsupported(_) => "unsupported",
            Error::Parse(_) => "parse",
            Error::Internal(_) => "internal",
        }
    }
}
