use thiserror::Error;

use crate::algebra::FamilyId;

/// A family parameter outside its admissible domain.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("family {family} requires {constraint}")]
pub struct DomainError {
    pub family: FamilyId,
    pub constraint: String,
}

/// A power or logarithm in an orbit equation whose argument is not positive.
///
/// This is how a point outside the sign stratum of an orbit shows up when the
/// orbit's equations are evaluated there.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("cannot evaluate `{term}`: base {argument} is not positive")]
pub struct EvaluationError {
    pub term: String,
    pub argument: f64,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error(transparent)]
    Evaluation(#[from] EvaluationError),
    #[error("orbit membership is asymmetric: F2 in orbit(F1) is {forward}, F1 in orbit(F2) is {backward}")]
    Asymmetry { forward: bool, backward: bool },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
