use thiserror::Error;

/// Errors surfaced by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("cannot parse {what}: {input:?}")]
    Parse { what: &'static str, input: String },

    #[error("index {index} out of range: expansion has {available} partial quotients")]
    IndexOutOfRange { index: i64, available: usize },

    #[error("enclosure too wide to decide: {0}")]
    Undecided(String),

    #[error("word length {len} exceeds brute-force cap {cap}")]
    CapExceeded { len: usize, cap: usize },

    #[error("budget exhausted: {0}")]
    BudgetExhausted(String),

    #[error("alphabet is not primitive: {0}")]
    NotPrimitive(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(what: &'static str, input: &str) -> Self {
        Error::Parse {
            what,
            input: input.to_string(),
        }
    }
}
