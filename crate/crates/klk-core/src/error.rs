//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("degree error: {0}")]
    Degree(String),
    #[error("arity error: expected {expected} vectors, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("singular expansion: {0}")]
    SingularExpansion(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid index: {0}")]
    InvalidIndex(String),
    #[error("invalid second fundamental form data: {0}")]
    InvalidSff(String),
    #[error("internal consistency failure: {0}")]
    InternalConsistency(String),
    #[error("scalar division error: {0}")]
    ScalarDivision(String),
    #[error("module table unavailable: {0}")]
    ModuleUnavailable(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
