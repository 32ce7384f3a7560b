use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("length {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("non-finite entry at index {0}")]
    NonFinite(usize),

    #[error("toeplitz first row and first column disagree at the corner")]
    ToeplitzCorner,

    #[error(
        "circulant ensemble needs m*B = {rows} <= d = {d}; zero-pad the signal to dimension {padded}"
    )]
    CirculantTooManyRows { rows: usize, d: usize, padded: usize },

    #[error("densifying needs {entries} entries, above the cap of {cap}")]
    DensifyCap { entries: u128, cap: u128 },

    #[error("{supports} supports exceed the enumeration cap of {cap}; use the monte_carlo method")]
    EnumerationCap { supports: u128, cap: u128 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub(crate) fn check_len(expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, actual })
    }
}
