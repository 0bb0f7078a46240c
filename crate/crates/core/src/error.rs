use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("field mismatch: {0}")]
    SpecMismatch(String),
    #[error("division by zero in GF({q})")]
    DivisionByZero { q: u16 },
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("invalid code: {0}")]
    InvalidCode(String),
    #[error("enumeration of {count} words exceeds cap {cap}")]
    EnumerationTooLarge { count: u128, cap: u128 },
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("symbol {symbol} out of range for GF({q})")]
    SymbolOutOfRange { symbol: u32, q: u16 },
    #[error("graph construction failed: {0}")]
    GraphConstruction(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("spectrum has not been computed for this graph")]
    SpectrumNotComputed,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("no valid theta: no integer m >= 1 with 4m/{delta_len} < {delta}")]
    NoValidTheta { delta: String, delta_len: usize },
    #[error("embedding block for edge {edge} is not a 0/1 indicator")]
    NotIntegral { edge: usize },
    #[error("internal consistency violation: {0}")]
    Internal(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("no dual witness: {0}")]
    WitnessUnavailable(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
