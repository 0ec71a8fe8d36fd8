use thiserror::Error;

use crate::polyring::ParseError;
use crate::polyring::groebner::LimitExceeded;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("{context}: dimension mismatch (expected {expected}, found {found})")]
    DimensionMismatch { context: &'static str, expected: usize, found: usize },
    #[error("{0}: matrix is singular")]
    Singular(&'static str),
    #[error("the zero form has no hypersurface")]
    ZeroForm,
    #[error("form is not homogeneous of degree 3")]
    NotDegreeThree,
    #[error("bad certificate: {0}")]
    BadCertificate(String),
    #[error("invalid algebra pair: {0}")]
    InvalidPair(String),
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Limit(#[from] LimitExceeded),
    #[error("document error: {0}")]
    Document(String),
}
