use thiserror::Error;

use crate::exactmat::{MinorIndex, Rat};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the domain of an operation (bad index, wrong shape, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// An enumeration guard was exceeded.
    #[error("resource limit: {0}")]
    Resource(String),

    /// Two routes that must agree did not.
    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("parse error: {0}")]
    Parse(String),

    /// The matrix has a negative minor.
    #[error("matrix is not totally nonnegative: minor {witness} = {value}")]
    NotTnn { witness: MinorIndex, value: Rat },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}
