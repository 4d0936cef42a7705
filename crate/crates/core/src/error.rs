use thiserror::Error;

/// Errors raised by the simulation and verification routines.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter lies outside the domain where the object is defined.
    #[error("parameter out of domain: {0}")]
    Domain(String),

    /// A documented precondition of an operation does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The integral defining a quasinorm diverges for every scale.
    #[error("function is not in the variable-exponent space: {0}")]
    InfiniteNorm(String),

    #[error("empirical characteristic function needs at least one sample")]
    EmptySamples,

    #[error("quadrature failed: {0}")]
    Quadrature(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn precondition<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Precondition(msg.into()))
}
