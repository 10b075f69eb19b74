use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed caller input: bad indices, unknown generators, mismatched
    /// ranks, non-square matrices and the like.
    #[error("input error: {0}")]
    Input(String),

    /// A literal could not be parsed.
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    /// A configured size or power cap would be exceeded.
    #[error("resource limit: {0}")]
    ResourceLimit(String),

    /// The truncation degree is too small for the requested decision.
    #[error("precision error: {0}")]
    Precision(String),

    /// Configuration document problems, with a location hint.
    #[error("config error at {location}: {msg}")]
    Config { location: String, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn resource(msg: impl Into<String>) -> Self {
        Error::ResourceLimit(msg.into())
    }

    pub(crate) fn config(location: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Config {
            location: location.into(),
            msg: msg.into(),
        }
    }
}
