use thiserror::Error;

/// Errors raised by the analysis library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown point group `{name}` (available: {available})")]
    UnknownGroup { name: String, available: String },

    #[error("unknown irrep `{0}`")]
    UnknownIrrep(String),

    #[error("missing overlap for group element `{0}`")]
    MissingElement(String),

    #[error("missing trace for class `{0}`")]
    MissingClass(String),

    #[error("irrep `{0}` has no entry in the descent map")]
    UnmappedIrrep(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not unitary (max residual {residual:.3e}): {context}")]
    NotUnitary { context: String, residual: f64 },

    #[error("orbital coefficients are not orthonormal under the overlap metric (max residual {0:.3e})")]
    NotOrthonormal(f64),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("Pauli shortcut unavailable: representation has a shell that is not +/-1 for every element; use exact mode")]
    NoPauliShortcut,

    #[error("size guard exceeded: {what} = {value} > {limit} (raise with PSYM_MAX_QUBITS or the override flag)")]
    SizeGuard {
        what: &'static str,
        value: usize,
        limit: usize,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
