use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Mismatched vector lengths or variable sets.
    #[error("dimension error: {0}")]
    Dimension(String),

    /// Input outside the domain of an operation (non-symmetric quiver, zero
    /// leading term, non-zero trace, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// `num` is not a multiple of `den`; carries the remainder in canonical
    /// rendering.
    #[error("polynomial not divisible, remainder {remainder}")]
    NotDivisible { remainder: String },

    /// A quantity that must be a non-negative integer was not.
    #[error("structural violation: {0}")]
    Structural(String),

    #[error("limit exceeded: {0}")]
    Limit(String),

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
}

impl Error {
    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }
}
