use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A coordinate or radius was NaN or infinite.
    #[error("non-finite input: {0}")]
    NonFinite(&'static str),

    /// A point sequence was empty where at least one point is required.
    #[error("empty point sequence ({0})")]
    EmptySequence(&'static str),

    /// A traversal referenced an index outside 1..=len.
    #[error("traversal index ({i},{j}) out of range for sizes {m}x{n}")]
    InvalidPath { i: usize, j: usize, m: usize, n: usize },

    /// A face label was not below the face count of the arrangement.
    #[error("face label {face} out of range (face count {count})")]
    FaceOutOfRange { face: u32, count: u32 },

    /// A face label does not fit in the configured label width.
    #[error("face label {face} does not fit in {bits} bits")]
    EncodingOverflow { face: u32, bits: u32 },

    /// Chunk-encoding parameters exceed one machine word.
    #[error("chunk encoding needs {needed} bits per word (chunk_len {tau} x (label bits {beta} + 1) > 64)")]
    ChunkTooWide { tau: u32, beta: u32, needed: u32 },

    /// An eager transition table would exceed the memory budget.
    #[error("eager table needs {needed} bytes (budget {budget}); use the lazy table mode")]
    TableBudget { needed: u64, budget: u64 },

    /// The quadratic optimization oracle refuses very large inputs.
    #[error("instance too large for the quadratic oracle (m*n = {mn}); use the fast path")]
    OracleTooLarge { mn: u64 },

    /// More pairwise distances fall in the queried interval than the
    /// enumeration threshold allows.
    #[error("{count} pairwise distances in interval (limit {limit}); shrink the interval")]
    IntervalTooDense { count: usize, limit: usize },

    /// Invalid tuning parameters.
    #[error("invalid tuning parameters: {0}")]
    BadParams(String),

    /// The lower-bound generator produced coordinates that fail its own
    /// membership verification.
    #[error("lower-bound construction failed verification: {0}")]
    Construction(String),

    /// A state/chunk fed to a compact automaton did not originate from it.
    #[error("internal consistency: {0}")]
    Internal(String),
}
