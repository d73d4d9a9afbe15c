//! Library error type.

use crate::linalg::LinalgError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("base ring mismatch")]
    RingMismatch,
    #[error("module mismatch: {0}")]
    ModuleMismatch(String),
    #[error("algebroid mismatch")]
    AlgebroidMismatch,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("input is not flat: {0}")]
    NotFlat(String),
    #[error("form is not closed")]
    NotClosed,
    #[error("unsupported base ring: {0}")]
    UnsupportedRing(String),
    #[error("input is not regular: {0}")]
    NotRegular(String),
    #[error("unknown model {0:?}")]
    UnknownModel(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
