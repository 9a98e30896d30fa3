use std::io;

use thiserror::Error;

/// Errors produced by the solver, the data generator and the study harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("grid mismatch: {left} nodes vs {right} nodes")]
    GridMismatch { left: usize, right: usize },

    #[error("non-finite value at step {step} (t = {time})")]
    BlowUp { step: usize, time: f64 },

    #[error("corrupted state: {0}")]
    CorruptedState(String),

    #[error("degenerate initial data: {0}")]
    DegenerateData(String),

    #[error("order fit failed: {0}")]
    Fit(String),

    #[error("malformed file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    /// Process exit code used by the command line tool.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::InvalidGrid(_)
            | Error::InvalidConfig(_)
            | Error::GridMismatch { .. }
            | Error::DegenerateData(_)
            | Error::Fit(_) => 2,
            Error::BlowUp { .. } | Error::CorruptedState(_) => 3,
            Error::Format(_) | Error::Io(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
