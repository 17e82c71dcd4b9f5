//! Crate-wide error type.

use thiserror::Error;

use crate::lattice::LatticeError;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Lattice(#[from] LatticeError),

    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },

    #[error("unknown identifier {name:?} at column {column}")]
    UnknownIdentifier { name: String, column: usize },

    #[error("word is not reduced: {0}")]
    NotReduced(String),

    #[error("word is not cyclically reduced: {0}")]
    NotCyclicallyReduced(String),

    #[error("empty word where a nonempty one is required")]
    EmptyWord,

    #[error("position {position} outside [{low}, {high}]")]
    OutOfRange {
        position: String,
        low: String,
        high: String,
    },

    #[error("materialized run of {0} letters exceeds the supported size")]
    TooLong(String),

    #[error("longest common initial segment does not exist")]
    NoCommonMax,

    #[error("word admits no cyclic decomposition")]
    NotInCdr,

    #[error("product undefined for {left} * {right}: presentation invalid")]
    ProductUndefined { left: String, right: String },

    #[error("invalid workspace: {0}")]
    Workspace(String),

    #[error("invalid boundary point: {0}")]
    InvalidBoundaryPoint(String),

    #[error("insufficient resolution: {0}")]
    Resolution(String),

    #[error("points lie in different classes")]
    CrossClass,

    #[error("exploration needed: class {0} is outside the explored region")]
    ExplorationNeeded(String),

    #[error("metric not implemented for dimension {0}")]
    UnsupportedDimension(usize),

    #[error("the two ends coincide")]
    IdenticalEnds,

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("walk did not stabilize: {0}")]
    Inconclusive(String),

    #[error("experiment failed: {0}")]
    Experiment(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Error {
        Error::Io(e.to_string())
    }
}

impl Error {
    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Experiment(_) | Error::Inconclusive(_) => 1,
            _ => 2,
        }
    }
}
