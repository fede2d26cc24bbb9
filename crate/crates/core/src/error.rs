use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid {name}: {value} ({reason})")]
    InvalidInput {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("identically zero polynomial has no isolated roots")]
    ZeroPolynomial,

    #[error("objective is not finite at x = {x}")]
    NonFinite { x: f64 },

    #[error("{formula} is undefined for these parameters: {reason}")]
    Undefined {
        formula: &'static str,
        reason: &'static str,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("unknown preset `{0}` (expected fig3, fig4, fig5, fig6, fig7 or fig8)")]
    UnknownPreset(String),

    #[error("cannot write {path}: {source}")]
    Output {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Rejects NaN and negative values.
pub(crate) fn nonneg(name: &'static str, value: f64) -> Result<f64> {
    if value.is_nan() || value < 0.0 {
        return Err(Error::InvalidInput {
            name,
            value,
            reason: "must be a non-negative number",
        });
    }
    Ok(value)
}

pub(crate) fn positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_nan() || value <= 0.0 {
        return Err(Error::InvalidInput {
            name,
            value,
            reason: "must be strictly positive",
        });
    }
    Ok(value)
}
