use thiserror::Error;

/// Errors raised by the solver library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A parameter is outside the domain where the operation is defined.
    #[error("invalid {name}: {reason}")]
    Domain { name: &'static str, reason: String },

    /// An index (slab, basis function, node) is out of range.
    #[error("index out of range: {0}")]
    Index(String),

    /// A series or adaptive rule failed to reach the requested tolerance.
    #[error("no convergence: {what} (achieved {achieved:e}, requested {requested:e})")]
    NoConvergence {
        what: &'static str,
        achieved: f64,
        requested: f64,
    },

    /// A linear system could not be factorized.
    #[error("singular system: {0}")]
    Singular(String),

    #[error("configuration: {0}")]
    Config(String),

    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(name: &'static str, reason: impl Into<String>) -> Error {
    Error::Domain {
        name,
        reason: reason.into(),
    }
}
