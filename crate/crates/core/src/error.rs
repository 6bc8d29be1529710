use thiserror::Error;

/// Errors raised by state construction and the numerical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("amplitude vector of length {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("qubit count {q} outside supported range 1..={max}")]
    QubitCount { q: usize, max: usize },
    #[error("state has zero norm")]
    ZeroNorm,
    #[error("dimension mismatch: expected {expected} qubits, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("basis index {index} out of range for {q} qubits")]
    IndexOutOfRange { index: usize, q: usize },
    #[error("qubit {qubit} out of range for {q} qubits")]
    QubitOutOfRange { qubit: usize, q: usize },
    #[error("matrix is not unitary (deviation {0:.3e})")]
    NotUnitary(f64),
    #[error("invalid product state parameter: {0}")]
    InvalidProductState(String),
    #[error("empty basis set")]
    EmptySet,
    #[error("invalid periodic spec q={q}, r={r}, l={l}: {reason}")]
    InvalidPeriodic {
        q: usize,
        r: usize,
        l: usize,
        reason: &'static str,
    },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("{y} is not coprime to {n}")]
    NotCoprime { y: u64, n: u64 },
    #[error("{0} is prime")]
    Prime(u64),
}

pub type Result<T> = std::result::Result<T, Error>;
