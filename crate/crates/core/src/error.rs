use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("field: {0}")]
    Field(String),

    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax {
        line: usize,
        col: usize,
        msg: String,
    },

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),

    #[error("duplicate name `{0}`")]
    Duplicate(String),

    #[error("relation on line {line} is not length-homogeneous (term lengths {lengths:?})")]
    NonHomogeneous { line: usize, lengths: Vec<usize> },

    #[error("relation on line {line} mixes paths with different endpoints")]
    NotParallel { line: usize },

    #[error("ideal is not admissible: {0}")]
    NotAdmissible(String),

    #[error("modules live over different algebras")]
    AlgebraMismatch,

    #[error("invalid module: {0}")]
    InvalidModule(String),

    #[error("invalid map: {0}")]
    InvalidMap(String),

    #[error("parameter out of range: {0}")]
    Parameter(String),

    #[error("search cap exceeded: {0}")]
    CapExceeded(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("internal verification failed: {0}")]
    Verification(String),
}

impl Error {
    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Hypothesis(_) => 2,
            Error::Verification(_) => 3,
            _ => 1,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
