use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("coupling vectors must be signed Cartesian unit vectors, got {0:?}")]
    NonAxisVector([f64; 3]),

    #[error("z = {z} nm lies outside the domain [{min}, {max}] nm")]
    OutOfDomain { z: f64, min: f64, max: f64 },

    #[error("mesh does not match the potential profile: {0}")]
    MeshMismatch(String),

    #[error("overlap matrix is not positive definite (pivot {pivot:e} at row {row}); the mesh is broken")]
    OverlapNotPositiveDefinite { row: usize, pivot: f64 },

    #[error("requested {requested} states but the problem has only {available} interior unknowns")]
    TooManyStates { requested: usize, available: usize },

    #[error("eigensolver did not converge for state {state} after {iterations} iterations")]
    NoConvergence { state: usize, iterations: usize },

    #[error("subband index {index} out of range ({available} solved)")]
    StateOutOfRange { index: usize, available: usize },

    #[error("interface at z = {0} nm is not a mesh node")]
    InterfaceOffNode(f64),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("rows do not match figure {figure}: {reason}")]
    FigureMismatch { figure: String, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
