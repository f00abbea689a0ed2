use thiserror::Error;

/// Problems with the textual or structural form of an input.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("invalid scalar: {0}")]
    InvalidScalar(String),
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("monomial order mismatch: {0}")]
    MonomialOrder(String),
    #[error("shape error: {0}")]
    Shape(String),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    /// The input is well formed but not an admissible instance.
    #[error("invalid input: {0}")]
    Input(String),
    /// An internal consistency check failed.
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn is_input_error(&self) -> bool {
        !matches!(self, Error::Invariant(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
