use thiserror::Error;

/// Errors produced by the combinatorial constructions and codecs.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A size or index argument is outside the domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("not an internal edge: {0}")]
    NotInternalEdge(String),

    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("invalid level function: {0}")]
    InvalidLevels(String),

    #[error("invalid zone function: {0}")]
    InvalidZones(String),

    #[error("invalid diaphragm: {0}")]
    InvalidDiaphragm(String),

    #[error("invalid painted tree: {0}")]
    InvalidPainted(String),

    #[error("invalid bipartition: {0}")]
    InvalidBipartition(String),

    #[error("not a subtree: {0}")]
    NotSubtree(String),

    #[error("arity mismatch: {0}")]
    ArityMismatch(String),

    /// A fraction argument has the wrong biarity; `index` is 1-based.
    #[error("fraction shape mismatch in {side} argument {index}: {message}")]
    Shape {
        side: &'static str,
        index: usize,
        message: String,
    },

    #[error("invalid term: {0}")]
    InvalidTerm(String),

    #[error("invalid poset: {0}")]
    InvalidPoset(String),

    #[error("poset is not graded")]
    NotGraded,
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(offset: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            offset,
            message: message.into(),
        }
    }
}
