use thiserror::Error;

/// Errors raised by algebra construction and verification routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),
    #[error("incompatible algebras: {0}")]
    IncompatibleAlgebra(String),
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
    #[error("degenerate state: {0}")]
    DegenerateState(String),
    #[error("not a *-homomorphism: {0}")]
    NotAHomomorphism(String),
    #[error("invalid character: {0}")]
    InvalidCharacter(String),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("invalid semigroup: {0}")]
    InvalidSemigroup(String),
    #[error("missing component: {0}")]
    MissingComponent(String),
    #[error("not a magic unitary: {0}")]
    NotMagic(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
