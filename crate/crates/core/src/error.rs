//! Error type shared by every module in the crate.

use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum DplocError {
    /// A parameter violated its domain (T <= 0, epsilon <= 0, delta outside (0,1), ...).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A confidence level or similar quantity fell outside the range for which
    /// the corresponding deviation bound is stated.
    #[error("out of range: {0}")]
    OutOfRange(String),

    /// Sample construction or an estimator received fewer points than required.
    #[error("too few points: need at least {needed}, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    /// Samples of different lengths were compared coordinate-wise.
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    /// A NaN or infinite value reached a constructor that requires finite data.
    #[error("non-finite value at index {index}: {value}")]
    NonFinite { index: usize, value: f64 },

    /// The block count does not divide the sample size.
    #[error("{blocks} blocks do not divide n = {n}; trim the sample to a multiple of the block count")]
    NotDivisible { n: usize, blocks: usize },

    /// A brute-force oracle was asked to run beyond its combinatorial budget.
    #[error("oracle limit exceeded: {0}")]
    OracleLimit(String),

    /// Malformed configuration or input data.
    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl DplocError {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Self::InvalidParameter(msg.into())
    }

    pub fn out_of_range(msg: impl Into<String>) -> Self {
        Self::OutOfRange(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Self::Config(msg.into())
    }

    /// Process exit code for the CLI: 2 for precondition/config errors, 3 for i/o.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Io { .. } => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, DplocError>;
