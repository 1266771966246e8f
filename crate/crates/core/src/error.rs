use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("pauli string length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("dense export of {requested} qubits exceeds the cap of {cap}")]
    DenseCapExceeded { requested: usize, cap: usize },

    #[error("qubit index {index} outside 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("malformed gate: {0}")]
    MalformedGate(String),

    #[error("invalid argument: {0}")]
    Invalid(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("parse error at line {line}: {message}")]
    ParseAt { line: usize, message: String },

    #[error("descriptors come from different evolution histories ({left} vs {right})")]
    MixedHistories { left: u64, right: u64 },

    #[error("empty keep set")]
    EmptyKeep,

    #[error("subsystem {subset:?} is not pure (purity {purity:.6}); use the mixed-state machinery")]
    SubsystemNotPure { subset: Vec<usize>, purity: f64 },

    #[error("{{a, b, purifier}} does not purify the pair (purity {purity:.6})")]
    NoPurification { purity: f64 },

    #[error("malformed density matrix: {0}")]
    MalformedMatrix(String),

    #[error("pair ({a}, {b}) is not correlated; nothing to attribute")]
    Uncorrelated { a: usize, b: usize },

    #[error("no decomposition certificate found: {0}")]
    NoCertificate(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
