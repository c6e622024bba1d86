use thiserror::Error;

/// Errors raised by field, polynomial, construction and sweep operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid characteristic: {0} is not prime")]
    InvalidCharacteristic(u64),
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("{0} is not enumerable")]
    NotEnumerable(String),
    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}
