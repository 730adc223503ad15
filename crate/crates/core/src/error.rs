use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("alphabet size {0} is outside 1..=256")]
    InvalidAlphabet(usize),

    #[error("symbol {symbol} is out of range for alphabet size {k}")]
    SymbolOutOfRange { symbol: usize, k: usize },

    #[error("word has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("duplicate codeword {0}")]
    DuplicateWord(String),

    #[error("coordinate {coord} is outside 1..={n}")]
    CoordOutOfRange { coord: usize, n: usize },

    #[error("coordinate {0} appears twice")]
    DuplicateCoord(usize),

    #[error("invalid symbol pair ({i},{j}) for alphabet size {k}")]
    InvalidPair { i: usize, j: usize, k: usize },

    #[error("invalid s-vector: {0}")]
    InvalidSVector(String),

    #[error("alphabet mismatch: expected k={expected}, found k={found}")]
    AlphabetMismatch { expected: usize, found: usize },

    #[error("matrix is not simple: row {row} repeats an earlier row")]
    NotSimple { row: usize },

    #[error("matrix entry {0} is not binary")]
    NonBinary(u8),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("search envelope exceeded: {0}")]
    Envelope(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
