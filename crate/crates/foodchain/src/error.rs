use thiserror::Error;

/// Errors produced by the solvers and model operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite state at t = {time}")]
    NonFiniteState { time: f64 },

    #[error("component {component} went negative ({value:e}) at t = {time}")]
    NegativeState {
        time: f64,
        component: usize,
        value: f64,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid option: {0}")]
    InvalidOptions(String),

    #[error("parameter file {path}, line {line}: {message}")]
    ParamFile {
        path: String,
        line: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
