use std::fmt;

use thiserror::Error;

/// Position in a source text, 1-based.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct SourceSpan {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("gate {kind} expects {expected} qubit(s), got {got}")]
    Arity { kind: String, expected: usize, got: usize },

    #[error("gate {0} uses qubit {1} more than once")]
    DuplicateQubit(String, usize),

    #[error("qubit index {index} out of range for width {width}")]
    QubitOutOfRange { index: usize, width: usize },

    #[error("placement is not injective: physical qubit {0} used twice")]
    NonInjective(usize),

    #[error("placement covers {got} logical qubits, circuit has {expected}")]
    PlacementWidth { expected: usize, got: usize },

    #[error("{span}: {message}")]
    Parse { span: SourceSpan, message: String },

    #[error("unknown architecture {0:?} (expected qx2, qx4 or @file)")]
    UnknownArchitecture(String),

    #[error("coupling graph: {0}")]
    Topology(String),

    #[error("control and target must differ (both {0})")]
    SameQubit(usize),

    #[error("device has {physical} physical qubits; exhaustive placement search is limited to {limit}")]
    SearchLimit { physical: usize, limit: usize },

    #[error("circuit uses {circuit} qubits but the device has only {device}")]
    CircuitTooWide { circuit: usize, device: usize },

    #[error("{what} supports at most {limit} qubits, got {got}")]
    TooManyQubits { what: &'static str, limit: usize, got: usize },

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("invalid probability distribution: {0}")]
    Distribution(String),

    #[error("invalid density matrix: {0}")]
    DensityMatrix(String),

    #[error("invalid noise parameters: {0}")]
    Noise(String),

    #[error("{0}")]
    Bench(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
