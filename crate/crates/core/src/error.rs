use thiserror::Error;

/// Errors produced by model construction, data loading, training and
/// order generation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid model structure: {0}")]
    InvalidModel(String),

    #[error("node index {node} out of range for tree with {len} nodes")]
    InvalidNodeIndex { node: usize, len: usize },

    #[error("sample has {got} features, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("dataset has {n} samples, need at least {min} to split")]
    TooFewSamples { n: usize, min: usize },

    #[error("non-numeric feature value {value:?} at row {row}, column {col}")]
    NonNumericFeature {
        row: usize,
        col: usize,
        value: String,
    },

    #[error("label column {0:?} not found")]
    LabelColumnNotFound(String),

    #[error("invalid training parameter: {0}")]
    InvalidParameter(String),

    #[error("unsupported document version {got:?}, expected {expected:?}")]
    SchemaVersion { expected: String, got: String },

    #[error("lattice has {states} states, exceeding the cap of {cap}; use a squirrel order instead")]
    LatticeCapExceeded { states: u128, cap: u64 },

    #[error("ordering set is empty")]
    EmptyOrderingSet,

    #[error("order enumeration would yield {count} orders, exceeding the guard of {guard}")]
    EnumerationTooLarge { count: u128, guard: u64 },

    #[error("requires a binary classification forest, got {n_classes} classes")]
    BinaryOnly { n_classes: usize },

    #[error("step order does not match forest: {0}")]
    OrderMismatch(String),

    #[error("invalid step order: {0}")]
    InvalidOrder(String),

    #[error("final accuracy is zero, normalized mean accuracy undefined")]
    ZeroFinalAccuracy,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
