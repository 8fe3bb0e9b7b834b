use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("divisor {0} does not lie on the surface")]
    NotOnSurface(String),
    #[error("embedding: {0}")]
    Embedding(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("class is not integral in the chosen basis: {0}")]
    NotIntegral(String),
    #[error("precision cap {cap} exhausted at p = {p}")]
    PrecisionExhausted { p: String, cap: u32 },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
