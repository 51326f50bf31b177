use std::path::PathBuf;

use thiserror::Error;

/// Errors surfaced by the simulator, network builders and experiment drivers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("qubit index {index} out of range for a {n_qubits}-qubit register")]
    QubitOutOfRange { index: usize, n_qubits: usize },

    #[error("duplicate qubit index {0} in subset")]
    DuplicateQubit(usize),

    #[error("cannot trace out all {0} qubits")]
    TraceAll(usize),

    #[error("length {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("matrix is not unitary (max deviation {0:e})")]
    NotUnitary(f64),

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("state is not normalized (norm deviation {0:e})")]
    NotNormalized(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("parameter vector has length {actual}, network expects {expected}")]
    ParamLength { expected: usize, actual: usize },

    #[error("{features} features do not fit an input layer of width {width}")]
    FeatureWidth { features: usize, width: usize },

    #[error("invalid network: {0}")]
    InvalidNetwork(String),

    #[error("objective is not finite at coordinate {index}")]
    NonFinite { index: usize },

    #[error("all Fisher samples have zero trace; the model does not depend on its parameters")]
    DegenerateFisher,

    #[error("adiabatic integration drifted in norm by {drift:e}; use a smaller time step")]
    Integration { drift: f64 },

    #[error("invalid config at `{path}`: {message}")]
    Config { path: String, message: String },

    #[error("{path}: malformed row {row}: {message}")]
    MalformedRow {
        path: PathBuf,
        row: usize,
        message: String,
    },

    #[error("{path}: unknown class label `{label}`")]
    UnknownLabel { path: PathBuf, label: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            path: path.into(),
            message: message.into(),
        }
    }
}
