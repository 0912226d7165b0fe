//! Error type shared across the crate.

/// Crate-wide error enum.
///
/// Every fallible operation in the library returns one of these variants so
/// that callers (including the CLI) can map failures to a small, stable set
/// of categories.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A quantity is undefined for the requested parameters (for example the
    /// sparse scale when `n * p^2 >= ln n`, or a probability outside [0, 1]).
    #[error("domain error: {0}")]
    Domain(String),

    /// Two arguments that must agree in size (graphs, permutations) do not.
    #[error("size mismatch: {0}")]
    SizeMismatch(String),

    /// An exhaustive routine was asked to run beyond its configured cap.
    #[error("cap exceeded: {0}")]
    CapExceeded(String),

    /// Malformed input: an invalid permutation word, an unparsable edge list,
    /// a config file that fails validation, and so on.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An underlying I/O failure while reading or writing files.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
    pub fn size_mismatch(msg: impl Into<String>) -> Self {
        Error::SizeMismatch(msg.into())
    }
    pub fn cap_exceeded(msg: impl Into<String>) -> Self {
        Error::CapExceeded(msg.into())
    }
    pub fn invalid_input(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
