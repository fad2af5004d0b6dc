use thiserror::Error;

/// Errors raised by the library. Structural problems with an automaton that
/// can still be represented are reported as [`crate::Diagnostic`]s instead.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),
    #[error("symbol `{0}` is not in the alphabet")]
    UnknownSymbol(String),
    #[error("state index {index} out of range (automaton has {count} states)")]
    UnknownState { index: usize, count: usize },
    #[error("alphabets differ: [{left}] vs [{right}]")]
    AlphabetMismatch { left: String, right: String },
    #[error("automaton is not deterministic")]
    NotDeterministic,
    #[error("vertex set {0:?} is not a vertex cover")]
    NotACover(Vec<usize>),
    #[error("graph is not nice: {0}")]
    NotNice(String),
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),
    #[error("invalid strategy: {0}")]
    InvalidStrategy(String),
    #[error("invalid parameters: {0}")]
    InvalidSpec(String),
    #[error("lasso period must not be empty")]
    EmptyPeriod,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
