use thiserror::Error;

pub type Result<T> = std::result::Result<T, BenchError>;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("invalid benchmark config: {0}")]
    Config(String),

    #[error("no results to categorize")]
    EmptyCase,

    #[error(transparent)]
    Core(#[from] hemivar_core::Error),

    #[error(transparent)]
    Contact(#[from] hemivar_contact::ContactError),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
