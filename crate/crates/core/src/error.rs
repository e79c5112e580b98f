use thiserror::Error;

/// Errors raised by the algebra, jet and invariant routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("variable-count mismatch: expected {expected}, found {found}")]
    VarCount { expected: usize, found: usize },

    #[error("jet order {available} is too low, {required} required")]
    InsufficientOrder { required: usize, available: usize },

    #[error("multi-index {beta} is not dominated by {alpha}")]
    NotDominated { alpha: String, beta: String },

    #[error("reparameterization must fix the origin (component {component} has constant term {value})")]
    NonzeroConstant { component: usize, value: String },

    #[error("singular matrix: {0}")]
    Singular(String),

    #[error("representation choice is not square: {rows} rows vs {cols} columns")]
    NotSquare { rows: usize, cols: usize },

    #[error("invalid representation choice: {0}")]
    InvalidChoice(String),

    #[error("relative invariant vanishes at the base point: {0}")]
    VanishingInvariant(String),

    #[error("singular frame: {0}")]
    SingularFrame(String),

    #[error("cannot parse rational {0:?}: exact p/q form required")]
    ParseRational(String),
}

pub type Result<T> = std::result::Result<T, Error>;
