use thiserror::Error;

use crate::ids::{ArrowId, ObjectId, Path};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FcatError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("duplicate {kind} identifier `{id}`")]
    DuplicateId { kind: &'static str, id: String },
    #[error("dangling reference to {kind} `{id}` in {context}")]
    DanglingRef {
        kind: &'static str,
        id: String,
        context: String,
    },
    #[error("composition of {path} needs data cut by the frontier: {detail}")]
    FrontierIncomplete { path: Path, detail: String },
    #[error("ill-typed path {path}: {detail}")]
    IllTypedPath { path: Path, detail: String },
    #[error("unknown arrow `{0}`")]
    UnknownArrow(ArrowId),
    #[error("unknown object `{0}`")]
    UnknownObject(ObjectId),
    #[error("{what} budget of {limit} exhausted")]
    BudgetExhausted { what: &'static str, limit: usize },
    #[error("no horizontal composite for ({left}, {right})")]
    MissingHcomp { left: ArrowId, right: ArrowId },
    #[error("no horizontal unit for object `{0}`")]
    MissingHunit(ObjectId),
    #[error("no coherence equivalence for {0}")]
    MissingTheta(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

impl FcatError {
    pub fn is_frontier(&self) -> bool {
        matches!(self, FcatError::FrontierIncomplete { .. })
    }

    pub(crate) fn from_json(err: serde_json::Error) -> Self {
        FcatError::Syntax {
            line: err.line(),
            column: err.column(),
            message: err.to_string(),
        }
    }
}

pub type Result<T, E = FcatError> = std::result::Result<T, E>;
