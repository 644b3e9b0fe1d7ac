use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid state at index {index}: value {value}")]
    InvalidState { index: usize, value: f64 },

    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),

    #[error("linear solve failed: residual {residual:e} exceeds bound {bound:e} (n = {n})")]
    SolverFailure { residual: f64, bound: f64, n: usize },

    #[error("state is constant, no shock to locate")]
    NoShock,

    #[error("diagnostic unavailable: {0}")]
    Unavailable(&'static str),

    #[error("run failed at step {step} (t = {time}): {source}")]
    Step {
        step: usize,
        time: f64,
        /// State at the start of the failed step.
        snapshot: Vec<f64>,
        #[source]
        source: Box<Error>,
    },

    #[error("config error: {0}")]
    Config(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    /// True for failures caused by the input (bad config, bad parameters)
    /// rather than by the numerics.
    pub fn is_config_error(&self) -> bool {
        matches!(self, Error::Config(_) | Error::InvalidParameter(_))
    }

    /// Failure of the numerics (solver, invalid state, divergence), including
    /// those wrapped with step context.
    pub fn is_solver_error(&self) -> bool {
        match self {
            Error::Step { .. } | Error::SolverFailure { .. } | Error::InvalidState { .. } | Error::NonFinite(_) => true,
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
