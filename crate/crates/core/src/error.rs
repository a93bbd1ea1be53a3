//! Crate-wide error type.

/// Errors raised by the solver.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Invalid configuration: bad geometry, material, or solver parameters.
    #[error("configuration error: {0}")]
    Config(String),

    /// A quantity was requested outside its valid domain (e.g. a frequency
    /// outside (0, Nyquist)).
    #[error("domain error: {0}")]
    Domain(String),

    /// The per-step implicit solve failed (non-convergence or zero pivot).
    #[error("solver fault: {0}")]
    Solver(String),

    /// A non-finite value entered or left a numerical kernel.
    #[error("non-finite value: {0}")]
    NonFinite(String),
}

impl Error {
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
    pub fn solver(msg: impl Into<String>) -> Self {
        Error::Solver(msg.into())
    }
    pub fn non_finite(msg: impl Into<String>) -> Self {
        Error::NonFinite(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
