use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The caller combined arguments that the operation does not accept.
    #[error("usage error: {0}")]
    Usage(String),

    #[error("sampling failed after {attempts} attempts (acceptance rate ~{acceptance_rate:.3e})")]
    Sampling { attempts: usize, acceptance_rate: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A flat family or a cut hyperplane is not in general position.
    #[error("general position violated: {0}")]
    GeneralPosition(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Usage(msg.into()))
}
