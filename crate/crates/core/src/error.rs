use thiserror::Error;

/// Errors raised while building or querying Coxeter systems and their complexes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoxeterError {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid Coxeter matrix at ({row}, {col}): {reason}")]
    InvalidMatrix {
        row: usize,
        col: usize,
        reason: String,
    },

    #[error("the Coxeter system is not even")]
    NotEven,

    #[error("the nerve is not a flag complex (violating clique {clique:?})")]
    NotFlag { clique: Vec<usize> },

    #[error("{what} exceeded the configured cap of {cap}")]
    ExplosionGuard { what: String, cap: usize },

    #[error("braid class of a word exceeded {cap} members")]
    WordTooLong { cap: usize },

    #[error("face {0:?} is not a simplex of the complex")]
    FaceAbsent(Vec<usize>),

    #[error("subset {inner} is not contained in {outer}")]
    TypeMismatch { inner: String, outer: String },

    #[error("truncation unsafe: {0}")]
    TruncationUnsafe(String),

    #[error("subset is not closed under faces: {0}")]
    NotClosed(String),

    #[error("element {element} does not lie in the parabolic subgroup generated by {subset}")]
    NotInSubgroup { element: String, subset: String },

    #[error("unknown generator {0}")]
    UnknownGenerator(String),
}

pub type Result<T> = std::result::Result<T, CoxeterError>;
