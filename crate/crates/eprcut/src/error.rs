//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("empty circuit")]
    EmptyCircuit,

    #[error("qubit index {index} out of range (circuit has {num_qubits} qubits)")]
    QubitOutOfRange { index: usize, num_qubits: usize },

    #[error("infeasible capacities: {total} slots for {required} qubits")]
    InfeasibleCapacities { total: usize, required: usize },

    #[error("instance too large: {0}")]
    InstanceTooLarge(String),

    #[error("{0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn invalid(message: impl Into<String>) -> Self {
        Error::InvalidArgument(message.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
