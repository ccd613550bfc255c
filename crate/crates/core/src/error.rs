use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("basis mismatch: {0}")]
    BasisMismatch(String),

    #[error("state has weight {weight:.3e} outside the zero-magnetization sector")]
    DataLoss { weight: f64 },

    #[error("dimension {dim} exceeds the dense eigensolver cap {cap}; use the Krylov propagator")]
    DenseCapExceeded { dim: usize, cap: usize },

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("time series too short: {0}")]
    SeriesTooShort(String),

    #[error("degenerate fit window: {0}")]
    DegenerateWindow(String),

    #[error("undefined estimate: {0}")]
    Undefined(String),

    #[error("realization {index} (seed {seed:#018x}): {source}")]
    Realization {
        index: usize,
        seed: u64,
        #[source]
        source: Box<Error>,
    },

    #[error("scan point n={n}, gamma={gamma}, J={j}: {source}")]
    ScanPoint {
        n: usize,
        gamma: f64,
        j: f64,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
