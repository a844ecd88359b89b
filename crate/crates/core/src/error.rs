use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid choice for subset {subset:?}: {reason}")]
    InvalidChoice { subset: Vec<usize>, reason: String },

    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("precision exhausted: at least {required_bits} bits required")]
    PrecisionExhausted { required_bits: u32 },

    #[error("budget exhausted: {0}")]
    BudgetExhausted(String),

    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),

    #[error("scale limit exceeded: {0}")]
    ScaleExceeded(String),

    #[error("mixed record schemas: {0}")]
    MixedSchema(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
