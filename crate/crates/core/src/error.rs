use thiserror::Error;

use crate::grading::MultiDegree;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("dimension mismatch: expected {expected} coordinates, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("join of an empty set of degrees")]
    EmptyJoin,

    #[error("invalid input: {0}")]
    Validation(String),

    #[error("face `{face}` of `{cell}` is not present at entry degree {degree}")]
    FaceMonotonicity { cell: String, face: String, degree: MultiDegree },

    #[error("entry degrees of `{cell}` are not an antichain: {a} and {b} are comparable")]
    NotAntichain { cell: String, a: MultiDegree, b: MultiDegree },

    #[error("boundary of boundary is nonzero on `{cell}`")]
    BoundarySquared { cell: String },

    #[error("relation {relation} at {degree} uses generator {generator} born at {born}")]
    RelationAddressing { relation: usize, degree: MultiDegree, generator: usize, born: MultiDegree },

    #[error("enumeration needs about {estimate} candidates, budget is {budget}")]
    BudgetExceeded { estimate: u128, budget: u128 },

    #[error("decomposition hypothesis violated: {0}")]
    HypothesisViolated(String),

    /// A check that holds for every valid input failed; signals a bug.
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Internal(_))
    }

    pub(crate) fn syntax(line: usize, message: impl Into<String>) -> Self {
        Error::Syntax { line, message: message.into() }
    }

    pub(crate) fn internal(message: impl Into<String>) -> Self {
        Error::Internal(message.into())
    }
}
