use thiserror::Error;

use crate::polyparse::ParseError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Input outside the domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Evaluation hit a pole of a rational map.
    #[error("pole: {0}")]
    Pole(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn pole<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Pole(msg.into()))
}
