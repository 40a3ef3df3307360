//! Crate-wide error type.

use crate::matrix::Matrix;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{0} is not a prime in [2, 2^31)")]
    NotPrime(u32),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u32, u32),

    #[error("square {square} does not commute; difference:\n{difference}")]
    NonCommutingSquare { square: usize, difference: Matrix },

    #[error("component {0} is not injective")]
    NotInjective(usize),

    #[error("component {0} is not surjective")]
    NotSurjective(usize),

    #[error("matching violates diagram bounds at {0}")]
    MatchingBounds(String),

    #[error("invalid interval [{a},{b}] for length {n}")]
    InvalidInterval { a: usize, b: usize, n: usize },

    #[error("invalid filtration: {0}")]
    InvalidFiltration(String),

    #[error("invalid simplicial map: {0}")]
    InvalidSimplicialMap(String),

    #[error("span morphisms have different targets")]
    SpanTargetMismatch,

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
