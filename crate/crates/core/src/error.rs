use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A model or configuration parameter violates its invariants.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// An argument lies outside the region where the operation is defined.
    #[error("domain error: {0}")]
    Domain(String),
    /// An iterative or adaptive method missed its accuracy target.
    #[error("no convergence in {what}: error estimate {estimate:e} exceeds target {target:e}")]
    NonConvergence {
        what: &'static str,
        estimate: f64,
        target: f64,
    },
    #[error("overflow: {0}")]
    Overflow(String),
    /// Every candidate of a fit failed to evaluate.
    #[error("no fit: {0}")]
    NoFit(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
