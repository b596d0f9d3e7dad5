use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("site {site} out of range for {n_qubits} qubits")]
    InvalidSite { site: usize, n_qubits: usize },

    #[error("site {0} appears more than once in a Pauli string")]
    DuplicateSite(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension {0} is not a power of two")]
    NotQubitDimension(usize),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("numerical invariant breached at t = {t}: {detail}")]
    InvariantBreach { t: f64, detail: String },

    #[error("exact propagation limited to dimension {cap}, got {dim}")]
    OracleCap { dim: usize, cap: usize },

    #[error("no initial coherence")]
    NoInitialCoherence,

    #[error("empty sweep")]
    EmptySweep,

    #[error("malformed CSV at line {line}: {detail}")]
    Csv { line: usize, detail: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code for the command-line runner.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvariantBreach { .. } => 3,
            Error::Io { .. } => 4,
            _ => 2,
        }
    }
}
