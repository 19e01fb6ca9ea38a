use thiserror::Error;

/// Errors produced by the core library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("matrix is not symmetric within {tol:e} (max deviation {max_dev:e})")]
    NotSymmetric { tol: f64, max_dev: f64 },

    #[error("invalid graph file: {0}")]
    InvalidGraph(String),

    #[error("instance too large: n = {n} exceeds the exhaustive-enumeration cap of {cap}")]
    TooLarge { n: usize, cap: usize },

    #[error("mu* is undefined: every spin configuration is a global minimizer")]
    NoSuboptimal,

    #[error("network is frustrated; the frustration-free stability analysis does not apply")]
    Frustrated,

    #[error("insufficient data: {got} admissible bins, need at least {need}")]
    InsufficientBins { got: usize, need: usize },

    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
