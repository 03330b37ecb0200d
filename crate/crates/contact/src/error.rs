use thiserror::Error;

pub type Result<T> = std::result::Result<T, ContactError>;

#[derive(Debug, Error)]
pub enum ContactError {
    #[error("invalid geometry: {0}")]
    Geometry(String),

    #[error("invalid material: {0}")]
    Material(String),

    #[error("invalid contact law: {0}")]
    Law(String),

    #[error("degenerate triangle {0} (non-positive area)")]
    DegenerateElement(usize),

    #[error(transparent)]
    Core(#[from] hemivar_core::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
