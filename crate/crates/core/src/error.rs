use thiserror::Error;

/// Errors shared across the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("self-loop on node {0} (1-based)")]
    SelfLoop(usize),
    #[error("duplicate edge between nodes {0} and {1} (1-based)")]
    DuplicateEdge(usize, usize),
    #[error("node index {index} out of range 1..={n_nodes}")]
    IndexOutOfRange { index: usize, n_nodes: usize },
    #[error("edge weight must be positive, got {0}")]
    NonPositiveWeight(f64),
    #[error("matrix is defective: eigenvector matrix condition number {0:.3e} exceeds 1e12")]
    DefectiveMatrix(f64),
    #[error("instance too large for dense oracle: NT = {actual} exceeds guard {guard}")]
    SizeGuard { actual: usize, guard: usize },
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("filter spec: {0}")]
    Schema(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("covariance model is not positive semi-definite: spectral value {0} below -1e-12")]
    NonPsdModel(f64),
    #[error("linear algebra backend: {0}")]
    Linalg(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<ndarray_linalg::error::LinalgError> for Error {
    fn from(e: ndarray_linalg::error::LinalgError) -> Self {
        Error::Linalg(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
