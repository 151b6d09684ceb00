use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("negative entry {value} at ({row}, {col})")]
    NegativeEntry { row: usize, col: usize, value: String },
    #[error("vertex presentation requires 0-1 entries, found {value} at ({row}, {col})")]
    NotZeroOne { row: usize, col: usize, value: String },
    #[error("adjacency graph is not strongly connected (vertex {unreachable} not reachable from vertex {from})")]
    NotIrreducible { from: usize, unreachable: usize },
    #[error("matrix has a zero row or column at index {index}")]
    ZeroRowOrColumn { index: usize },
    #[error("adjacency matrix is a permutation matrix")]
    PermutationMatrix,
    #[error("input too large: {0}")]
    TooLarge(String),
    #[error("|B_{k}| = {count} exceeds the enumeration cap {limit} (SFTLAB_MAX_WORDS)")]
    TooManyWords { k: usize, count: u64, limit: u64 },
    #[error("inadmissible: {0}")]
    Inadmissible(String),
    #[error("word is not cyclically admissible")]
    NotCyclicallyAdmissible,
    #[error("functions live on different presentations")]
    PresentationMismatch,
    #[error("positivity is only defined for integer-valued functions")]
    RationalNotSupported,
    #[error("mismatched input: {0}")]
    MismatchedInput(String),
    #[error("invalid function: {0}")]
    InvalidFunction(String),
    #[error("invalid transducer: {0}")]
    InvalidTransducer(String),
    #[error("transducer has no transition from state {state} on symbol {symbol}")]
    UndefinedTransition { state: usize, symbol: u32 },
    #[error("transducer starves: a cycle emits no output")]
    Starvation,
    #[error("transducer output is inadmissible in the codomain: {0}")]
    InadmissibleOutput(String),
    #[error("transducer domain/codomain mismatch")]
    DomainMismatch,
    #[error("insufficient lookahead: {0}")]
    InsufficientLookahead(String),
    #[error("expansion requires a vertex presentation")]
    NotVertexKind,
    #[error("invalid result: {0}")]
    InvalidResult(String),
    #[error("invalid witness: {0}")]
    InvalidWitness(String),
    #[error("contradiction detected: {0}")]
    ContradictionDetected(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
