use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A quantity was requested outside the domain where it is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// Invalid input parameters (negative lengths, malformed config, ...).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A numerical procedure did not reach its accuracy target.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// Config file problems.
    #[error("config error at line {line}: {message}")]
    Config { line: usize, message: String },
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }

    /// Short machine-readable tag for the error variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::Numerical(_) => "numerical",
            Error::Config { .. } => "config",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
