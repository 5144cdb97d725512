use thiserror::Error;

/// Errors reported by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("subcomplex is not closed in its parent complex")]
    NotClosed,

    #[error("map does not respect the filtration: {0}")]
    Filtration(&'static str),

    #[error("genericity sampling exhausted its retry budget ({attempts} attempts)")]
    GenericityBudget { attempts: usize },

    #[error("slope fit needs at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("slope fit is degenerate: {0}")]
    DegenerateFit(&'static str),

    #[error("general position violated by members {0:?}")]
    GeneralPosition(Vec<usize>),

    #[error("restriction on degree {degree} cohomology of member {index} is not surjective")]
    NotSurjective { degree: usize, index: usize },

    #[error("required net size {needed} exceeds family size {available}")]
    NetTooLarge { needed: usize, available: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid instance data: {0}")]
    InvalidInstance(String),
}

pub type Result<T> = std::result::Result<T, Error>;
