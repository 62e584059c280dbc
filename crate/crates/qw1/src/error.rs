use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied value violates a documented precondition.
    #[error("invalid argument: {0}")]
    Argument(String),

    /// Operands live on incompatible registers or have incompatible shapes.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// An iterative numeric routine failed to converge.
    #[error("numeric failure after {iterations} iterations: {message}")]
    Numeric { message: String, iterations: usize },

    /// The gate has no analytic catalog entry; callers fall back to the
    /// numeric path.
    #[error("gate not in analytic catalog")]
    NotInCatalog,

    /// Malformed input file or JSON document.
    #[error("parse error in {field}: {message}")]
    Parse { field: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    pub(crate) fn dim(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }
}
