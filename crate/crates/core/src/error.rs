use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("round {round} issued {size} queries, tail rounds allow at most one")]
    QueryShapeViolation { round: usize, size: usize },
    #[error("tail-adaptive strategies have no parallel amplification")]
    TailAmplification,
    #[error("{what} = {value} exceeds the cap of {cap}")]
    CapExceeded {
        what: &'static str,
        value: u128,
        cap: u128,
    },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("residue {value} is not reduced modulo {p}")]
    InvalidResidue { value: u64, p: u64 },
    #[error("index {index} outside 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("operation needs a Hadamard code")]
    UnsupportedCode,
    #[error("label pool exhausted: need {need}, {available} available")]
    PoolExhausted { need: usize, available: usize },
    #[error("promise violated: {0}")]
    PromiseViolation(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid decision tree: {0}")]
    InvalidTree(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
