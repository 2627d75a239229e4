use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid correspondence: {0}")]
    InvalidCorrespondence(String),
    #[error("enumeration budget exceeded: {needed} candidates > budget {budget}; use the annealing heuristic")]
    BudgetExceeded { needed: f64, budget: f64 },
    #[error("search bound exceeded: {0}")]
    BoundExceeded(String),
    #[error("missing data: {0}")]
    Missing(String),
    #[error("empty set: {0}")]
    Empty(String),
    #[error("uncoverable points: {0:?}")]
    Uncoverable(Vec<usize>),
    #[error("ambiguous sign for points {0:?}: incomparable to every point of the surface")]
    SignAmbiguity(Vec<usize>),
    #[error("ambiguous orientation: {0}")]
    AmbiguousOrientation(String),
    #[error("insufficient resolution: {0}")]
    Resolution(String),
}

pub type Result<T> = std::result::Result<T, Error>;
