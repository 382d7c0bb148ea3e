use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or inconsistent input data. `path` locates the offending field.
    #[error("{path}: {message}")]
    Input { path: String, message: String },

    /// A computed identity failed. Always a bug or a bad surface, never noise.
    #[error("check failed: {0}")]
    Check(String),

    /// An enumeration would exceed its configured budget.
    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn input(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Input { path: path.into(), message: message.into() }
    }

    pub fn check(message: impl Into<String>) -> Self {
        Error::Check(message.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
