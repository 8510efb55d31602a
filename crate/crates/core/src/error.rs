use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("polynomial {poly:#x} is not primitive of degree {m}")]
    NotPrimitive { m: u32, poly: u32 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("dimension mismatch: expected {expected_rows}x{expected_cols}, got {rows}x{cols}")]
    DimensionMismatch {
        expected_rows: usize,
        expected_cols: usize,
        rows: usize,
        cols: usize,
    },

    #[error("exhaustive enumeration refused: k={k} exceeds the budget of {max}")]
    EnumerationBudget { k: usize, max: usize },

    #[error("threshold bracket [{lo_db}, {hi_db}] dB does not straddle success/failure ({detail})")]
    Bracket { lo_db: f64, hi_db: f64, detail: String },

    #[error("scaling schedule unavailable at {ebn0_db} dB: {reason}")]
    ScheduleUnavailable { ebn0_db: f64, reason: String },

    #[error("malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
