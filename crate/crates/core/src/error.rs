use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian: |M - M^H| = {deviation:.3e}")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not positive semidefinite: eigenvalue {eigenvalue:.3e}")]
    NotPsd { eigenvalue: f64 },

    #[error("matrix is not complex symmetric: |M - M^T| = {deviation:.3e}")]
    NotSymmetric { deviation: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid ensemble: {0}")]
    InvalidEnsemble(String),

    #[error("invalid X-state spec: {0}")]
    InvalidSpec(String),

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("invalid pure state: {0}")]
    InvalidState(String),

    #[error("bad partition: keep set must be a nonempty proper subset of {n_qubits} qubits")]
    BadPartition { n_qubits: usize },

    #[error("bad arity: {0}")]
    BadArity(String),

    #[error("bad rank {rank} for dimension {dim}")]
    BadRank { rank: usize, dim: usize },

    #[error("operation requires an even number of qubits, got {n_qubits}")]
    OddN { n_qubits: usize },

    #[error("state has zero invariant; use the zero-polytope decomposition")]
    ZeroCase,

    #[error("state is not in the zero polytope: invariant {value:.3e}")]
    NotZeroCase { value: f64 },

    #[error("phase closure infeasible: largest weight {largest:.6e} exceeds the rest {rest:.6e}")]
    Infeasible { largest: f64, rest: f64 },

    #[error("dimension {dim} exceeds the oracle limit of {limit}")]
    TooLarge { dim: usize, limit: usize },

    #[error("invalid oracle config: {0}")]
    InvalidConfig(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("validation error: {0}")]
    Validation(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
