use std::path::PathBuf;

/// Errors produced by the reconstruction library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A configuration value violates a documented precondition.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// Arguments are individually valid but do not fit together
    /// (length mismatch, unsupported combination, ...).
    #[error("usage error: {0}")]
    Usage(String),

    /// A netpbm stream could not be decoded.
    #[error("malformed image at byte {offset}: {message}")]
    Format { offset: usize, message: String },

    /// The dense linear system assembled by the fixed-point oracle is singular.
    #[error("singular system: {0}")]
    Singular(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn config(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

pub(crate) fn usage(msg: impl Into<String>) -> Error {
    Error::Usage(msg.into())
}
