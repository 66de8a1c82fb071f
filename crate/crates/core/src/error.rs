use thiserror::Error;

/// Error kinds surfaced by the engine. `Usage` marks violated
/// preconditions, `Resource` marks configured size ceilings, and
/// `Internal` marks conditions that contradict verified theory and must
/// abort loudly instead of producing wrong tables.
#[derive(Debug, Error)]
pub enum Error {
    #[error("usage: {0}")]
    Usage(String),
    #[error("arithmetic: {0}")]
    Arithmetic(String),
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("internal: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }
    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}
