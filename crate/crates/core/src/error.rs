use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("points {0} and {1} coincide")]
    DuplicatePoint(usize, usize),

    #[error("points {0}, {1}, {2} are collinear")]
    Collinear(usize, usize, usize),

    #[error("segments {0:?} and {1:?} share an endpoint")]
    SharedEndpoint((usize, usize), (usize, usize)),

    #[error("vertex index {index} out of range for {n} points")]
    VertexOutOfRange { index: usize, n: usize },

    #[error("invalid coloring: {0}")]
    InvalidColoring(String),

    #[error("invalid matching: {0}")]
    InvalidMatching(String),

    #[error("invalid details: {0}")]
    InvalidDetails(String),

    #[error("invalid offset pair ({0}, {1})")]
    InvalidOffsets(i64, i64),

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("instance too large: {0}")]
    TooLarge(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("i/o error: {0}")]
    Io(String),

    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
