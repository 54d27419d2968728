use thiserror::Error;

/// Errors produced by network construction, message parsing and scheduling.
#[derive(Debug, Error)]
pub enum Error {
    #[error("network size {0} must be a power of two, at least 4")]
    InvalidSize(usize),

    #[error("address {value} out of range for a {size}-port network")]
    AddressOutOfRange { value: u32, size: usize },

    #[error("stage {stage} out of range (network has stages 0..={max})")]
    StageOutOfRange { stage: u32, max: u32 },

    #[error("boundary {boundary} out of range (valid boundaries 0..={max})")]
    BoundaryOutOfRange { boundary: u32, max: u32 },

    #[error("duplicate source address {address}")]
    DuplicateSource { address: u32 },

    #[error("line {line}: duplicate source address {address} (first used on line {first_line})")]
    DuplicateSourceAt {
        address: u32,
        first_line: usize,
        line: usize,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{algorithm} requires a network of size 8 or larger, got {size}")]
    NetworkTooSmall {
        algorithm: &'static str,
        size: usize,
    },

    #[error("scheduling order must be a permutation of the message indices 0..{expected}")]
    InvalidOrder { expected: usize },

    #[error("row length mismatch: expected {expected}, got {got}")]
    RaggedRows { expected: usize, got: usize },

    #[error("benchmark configuration: {0}")]
    BenchConfig(String),

    #[error("invariant violation: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
