use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("operands live over different variable tables")]
    TableMismatch,

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),

    #[error("x-derivative of `{base}` needs jet order {order}, beyond the configured maximum {max}")]
    JetOrderExceeded { base: String, order: u32, max: u32 },

    #[error("truncation window is empty: no coefficient of the result is exact")]
    EmptyWindow,

    #[error("coefficient of lambda^{0} lies below the truncation floor")]
    Indeterminate(i64),

    #[error("insufficient truncation depth: {0}")]
    Truncation(String),

    #[error("expected {expected} arguments, got {got}")]
    Arity { expected: usize, got: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("tensor entry {0:?} is not constant")]
    NonConstant(Vec<usize>),

    #[error("series is not a polynomial in lambda: {0}")]
    NotPolynomial(String),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("non-finite state encountered at t = {t}")]
    NonFinite { t: f64 },

    #[error("degenerate parameters: {0}")]
    Degenerate(String),

    #[error("invalid argument: {0}")]
    Invalid(String),
}
