use thiserror::Error;

/// Errors from labeled-operator algebra.
#[derive(Debug, Error)]
pub enum OpError {
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("label `{0}` has zero dimension")]
    ZeroDim(String),
    #[error("label `{label}` has mismatched dimensions {a} and {b}")]
    DimMismatch {
        label: String,
        a: usize,
        b: usize,
    },
    #[error("entry count {entries} does not match layout dimension {dim}")]
    ShapeMismatch { entries: usize, dim: usize },
    #[error("label list is not a permutation of the layout")]
    NotPermutation,
    #[error("layouts differ: {0}")]
    LayoutMismatch(String),
    #[error("operator is not Hermitian")]
    NotHermitian,
    #[error("trace-and-replace pairs overlap at label `{0}`")]
    OverlappingPairs(String),
    #[error("{0}")]
    Invalid(String),
}
