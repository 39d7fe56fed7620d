use thiserror::Error;

use crate::Symbol;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("incomplete codebook: no code for symbol {0}")]
    IncompleteCodebook(Symbol),
    #[error("infeasible code lengths: Kraft sum exceeds 1")]
    InfeasibleLengths,
    #[error("malformed tree: {0}")]
    MalformedTree(String),
    #[error("unsupported alphabet size {0}")]
    UnsupportedAlphabet(u64),
    #[error("value {value} does not fit in {len} bits")]
    Overflow { value: u64, len: u32 },
    #[error("symbol {symbol} out of range for alphabet of size {n}")]
    InvalidSymbol { symbol: u64, n: u64 },
    #[error("bit stream truncated")]
    Truncated,
    #[error("corrupt data: {0}")]
    Corrupt(String),
    #[error("corrupt header: {0}")]
    CorruptHeader(String),
    #[error("bad container format: {0}")]
    Format(String),
    #[error("too large: {0}")]
    TooLarge(String),
    #[error("encoder state corrupted: {0}")]
    StateCorruption(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Short stable tag used as the machine-readable prefix of CLI errors.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidDistribution(_) => "invalid-distribution",
            Error::IncompleteCodebook(_) => "incomplete-codebook",
            Error::InfeasibleLengths => "infeasible-lengths",
            Error::MalformedTree(_) => "malformed-tree",
            Error::UnsupportedAlphabet(_) => "unsupported-alphabet",
            Error::Overflow { .. } => "overflow",
            Error::InvalidSymbol { .. } => "invalid-symbol",
            Error::Truncated => "truncated",
            Error::Corrupt(_) => "corrupt",
            Error::CorruptHeader(_) => "corrupt-header",
            Error::Format(_) => "format",
            Error::TooLarge(_) => "too-large",
            Error::StateCorruption(_) => "state-corruption",
            Error::Io(_) => "io",
        }
    }
}
