use thiserror::Error;

/// Errors surfaced by the library. Reconstruction failures are not errors;
/// they are reported through `Option`/sentinel values by the procedures
/// themselves.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("field parameters differ between operands")]
    ParamsMismatch,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("usage error: {0}")]
    Usage(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("construction failed: {0}")]
    Construction(String),
    #[error("resource cap exceeded: {0}")]
    Resource(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
