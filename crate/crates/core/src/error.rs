use thiserror::Error;

#[derive(Debug, Error)]
pub enum PlateError {
    /// A series invariant (minimum valuation) was violated.
    #[error("{op}: series has valuation {found}, needs at least {required}")]
    Valuation {
        op: &'static str,
        required: usize,
        found: usize,
    },

    #[error("domain error: {0}")]
    Domain(String),

    /// Orders were requested out of sequence.
    #[error("sequencing error: {0}")]
    Sequencing(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = PlateError> = std::result::Result<T, E>;
