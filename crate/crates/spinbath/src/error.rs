//! Error taxonomy shared by every module of the crate.

use thiserror::Error;

/// All failure modes surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// A scenario or bath description violates a precondition. The message
    /// carries the offending field path where one exists.
    #[error("configuration error: {0}")]
    Config(String),

    /// A quantum-state argument is not a valid density matrix (or a
    /// dephasing coefficient left the closed unit disk).
    #[error("state error: {0}")]
    State(String),

    /// A request exceeds a hard resource guard (e.g. entangled-block size).
    #[error("capacity error: {0}")]
    Capacity(String),

    /// An iterative numerical routine failed to converge; the message
    /// includes the residual it got stuck at.
    #[error("numeric error: {0}")]
    Numeric(String),

    /// Filesystem failure, annotated with the path involved.
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn state(msg: impl Into<String>) -> Self {
        Error::State(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
