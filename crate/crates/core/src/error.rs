use thiserror::Error;

/// Errors produced by the library.
///
/// `Input` covers malformed or out-of-contract arguments, `Domain` covers
/// well-formed data that the construction rejects (a non-elliptic Frobenius
/// image, a non-regular parameter), and `Consistency` signals an internal
/// invariant that failed to hold.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("internal consistency error: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
