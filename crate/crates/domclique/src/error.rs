//! Error type shared by all modules.

/// Errors surfaced by the library.
///
/// `Domain` marks arguments outside an operation's mathematical domain,
/// `Capacity` marks sizes beyond what the representation supports. The two
/// are kept apart because callers (notably the CLI) map them to different
/// exit codes.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("capacity error: {0}")]
    Capacity(String),
    /// An estimate was requested from an aggregate that carries no usable
    /// trials for it (e.g. a ratio mean when every trial had Y_r = 0).
    #[error("undefined estimate: {0}")]
    UndefinedEstimate(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
    pub(crate) fn capacity(msg: impl Into<String>) -> Self {
        Error::Capacity(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
