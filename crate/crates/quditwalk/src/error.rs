use thiserror::Error;

/// Errors raised anywhere in the library.
///
/// The variants line up with the CLI exit codes: `Domain` and `Range` map to
/// 2, `Verification` to 3, and parse failures are reported as usage errors.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("range error: {0}")]
    Range(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("position code {0:?} is not in the mapping range")]
    NotInRange(Vec<usize>),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
