use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter lies outside its admissible range.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// Coarse step count does not divide the master grid.
    #[error("coarse grid n = {n} does not divide the master grid n_fine = {n_fine}")]
    GridMismatch { n: usize, n_fine: usize },

    #[error("time {t} is not a node of the master grid with n_fine = {n_fine}")]
    OffGrid { t: f64, n_fine: usize },

    #[error("empty input: {0}")]
    Empty(&'static str),

    /// Regression cannot be performed (too few rows or vanishing errors).
    #[error("degenerate fit: {0}")]
    Degenerate(String),

    #[error("unsupported drift kind `{0}` for this operation")]
    UnsupportedDrift(&'static str),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
