//! Error type shared by every module of the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension d = {0}: need d >= 2")]
    InvalidDimension(usize),

    #[error("displacement index ({m}, {n}) out of range for d = {d}")]
    IndexOutOfRange { m: usize, n: usize, d: usize },

    #[error("{name} = {value} is outside its valid range [{lo}, {hi}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("matrix is not Hermitian (max |A - A^H| = {0:e})")]
    NotHermitian(f64),

    #[error("eigenvalue {0:e} is below the clamping floor; input is not positive semidefinite")]
    NegativeEigenvalue(f64),

    #[error("amplitudes are not normalized (sum of squares = {0})")]
    NotNormalized(f64),

    #[error("invalid state parameters: {0}")]
    InvalidState(String),

    #[error("invalid mu grid: {0}")]
    InvalidGrid(String),

    #[error("delta I changes sign more than once; brackets: {brackets:?}")]
    MultipleCrossings { brackets: Vec<(f64, f64)> },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("cannot write {path}: {source}")]
    Output {
        path: std::path::PathBuf,
        source: std::io::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Rejects `value` unless `lo <= value <= hi`. NaN is always rejected.
pub(crate) fn check_range(name: &'static str, value: f64, lo: f64, hi: f64) -> Result<()> {
    if value >= lo && value <= hi {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            name,
            value,
            lo,
            hi,
        })
    }
}

pub(crate) fn check_dimension(d: usize) -> Result<()> {
    if d < 2 {
        Err(Error::InvalidDimension(d))
    } else {
        Ok(())
    }
}
