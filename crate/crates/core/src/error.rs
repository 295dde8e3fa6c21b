use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("entry {value} at position {position} is outside [1, {n}]")]
    EntryOutOfRange { position: usize, value: u32, n: usize },

    #[error("words must have at least one entry")]
    EmptyWord,

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("{images:?} is not a permutation of [1, {}]", images.len())]
    NotAPermutation { images: Vec<usize> },

    #[error("k = {k} is outside [2, {n}]")]
    InvalidK { n: usize, k: usize },

    #[error("n = {n} is below the minimum of {min}")]
    InvalidN { n: usize, min: usize },

    #[error("n = {n} exceeds the cap of {cap} for {what}")]
    BudgetExceeded { what: &'static str, n: usize, cap: usize },

    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),

    #[error("malformed sign assignment: {0}")]
    MalformedSigns(String),

    #[error("invalid spanning tree: {0}")]
    InvalidTree(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("cannot parse {input:?}: {reason}")]
    Parse { input: String, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
