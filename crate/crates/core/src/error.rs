use thiserror::Error;

/// Errors raised anywhere in the kernel.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parameter ring mismatch: [{0}] vs [{1}]")]
    RingMismatch(String, String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("duplicate symbol `{0}`")]
    DuplicateSymbol(String),
    #[error("no value given for symbol `{0}`")]
    MissingSymbol(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("basis mismatch: `{0}` vs `{1}`")]
    BasisMismatch(String, String),
    #[error("generator index {0} out of range")]
    InvalidGenerator(usize),
    #[error("not expressible in basis `{basis}`: {what}")]
    NotInSpan { basis: String, what: String },
    #[error("invalid basis: {0}")]
    InvalidBasis(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("not central modulo this reduction: {0}")]
    NotCentral(String),
    #[error("unknown diagram label `{0}`")]
    UnknownDiagram(String),
    #[error("malformed data: {0}")]
    Data(String),
}

pub type Result<T> = std::result::Result<T, Error>;
