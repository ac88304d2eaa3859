use thiserror::Error;

/// Errors raised by instance construction, solvers, and reductions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("symbol {symbol} is outside the alphabet (size {size})")]
    SymbolOutOfRange { symbol: usize, size: usize },

    #[error("index {index} is out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("vertex {vertex} has no admissible symbol left after self-loop normalization")]
    UnsatisfiableVertex { vertex: usize },

    #[error("graph has self-loops; normalize them away first")]
    SelfLoopsPresent,

    #[error("sequence kind `{sequence}` does not match instance kind `{instance}`")]
    KindMismatch {
        sequence: &'static str,
        instance: &'static str,
    },

    #[error("budget exhausted: more than {cap} states visited at threshold {threshold}")]
    BudgetExhausted { cap: u64, threshold: usize },

    #[error("infeasible endpoint: {0}")]
    InfeasibleEndpoint(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("size limit exceeded: {0}")]
    TooLarge(String),

    #[error("universe cannot be covered: {0}")]
    Uncoverable(String),

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error("attempt budget exhausted: {0}")]
    AttemptsExhausted(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn malformed(msg: impl Into<String>) -> Self {
        Error::Malformed(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
