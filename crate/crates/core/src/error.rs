use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("functions live on different meshes")]
    IncompatibleMesh,

    #[error("length mismatch: expected {expected} coefficients, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("singular tridiagonal system (pivot {pivot:e} at row {row})")]
    SingularSystem { row: usize, pivot: f64 },

    #[error("invalid problem data: {0}")]
    InvalidSpec(String),

    #[error("coordinate {0} lies outside [0, 1]")]
    Domain(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("negative multiplier {value} on element {element}")]
    InvalidMultiplier { element: usize, value: f64 },

    #[error("approximation violates the obstacle by {0:e}")]
    Infeasible(f64),

    #[error("efficiency index undefined: {0}")]
    UndefinedIndex(String),

    #[error("run with f = {f}: {source}")]
    Row { f: f64, source: Box<Error> },

    #[error("malformed dump: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
