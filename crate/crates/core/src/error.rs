use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("mesh topology error: {0}")]
    Topology(String),

    #[error("degenerate geometry: {0}")]
    Geometry(String),

    /// Two cells sharing an edge or face disagree on a moment of a field that
    /// should be continuous across them.
    #[error("non-conforming field: {0}")]
    NonConforming(String),

    #[error("degenerate system: {0}")]
    DegenerateSystem(String),

    #[error("singular system: {0}")]
    SingularSystem(String),

    #[error("no convergence after {iterations} iterations (relative residual {residual:.3e})")]
    IterationLimit { iterations: usize, residual: f64 },

    #[error("decomposition failed: constraint residual {residual:.3e} exceeds {tolerance:.1e}")]
    DecompositionFailure { residual: f64, tolerance: f64 },

    #[error("problem too large for the dense path: {size} > {cap}")]
    Size { size: usize, cap: usize },

    #[error("linear algebra backend failure: {0}")]
    Backend(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
