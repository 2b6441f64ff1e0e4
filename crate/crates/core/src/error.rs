use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid rank {0}: need n >= 2")]
    InvalidRank(usize),

    #[error("unsupported rank {n}: {reason}")]
    UnsupportedRank { n: usize, reason: String },

    #[error("index out of range: {0}")]
    Index(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("syntax error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown generator {0}")]
    UnknownGenerator(String),

    #[error("singular lattice: gram matrix is degenerate")]
    SingularLattice,

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error("{0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
