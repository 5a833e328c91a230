use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable index must be at least 1")]
    ZeroIndex,
    #[error("parse error at offset {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown combinator `{0}` (expected I, K or S)")]
    UnknownCombinator(String),
    #[error("unbound variable `{0}` (free variables must be named x1, x2, ...)")]
    Unbound(String),
    #[error("not a first-order term: {0}")]
    NotFirstOrder(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("symbol `{sym}` expects {expected} arguments, got {got}")]
    Arity { sym: String, expected: usize, got: usize },
    #[error("symbol `{0}` is used both as a function and as a predicate")]
    SymbolClash(String),
    #[error("sequence prefix has {have} entries but the term has rank {rank}")]
    InsufficientPrefix { have: usize, rank: u32 },
    #[error("invalid structure: {0}")]
    Structure(String),
    #[error("carrier element {0} is outside the carrier")]
    OutOfCarrier(usize),
    #[error("enumeration of {estimate} cases exceeds the cap of {cap}")]
    EnumerationCap { estimate: u128, cap: u128 },
    #[error("step budget of {0} exhausted")]
    FuelExhausted(u64),
}

pub(crate) fn parse_err(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse { pos, msg: msg.into() }
}
