//! Sparse multivariate polynomials with exact rational coefficients.

mod matrix;
mod monomial;
pub mod parse;
mod polynomial;
mod ring;

pub use matrix::PolyMatrix;
pub use monomial::Monomial;
pub use parse::{parse_poly, Expr, ParseError, ParseErrorKind};
pub use polynomial::Poly;
pub use ring::{MonomialOrder, RingError, RingSpec};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("polynomials live in different rings")]
    RingMismatch,
    #[error("variable index {index} out of range for a ring with {nvars} variables")]
    VariableOutOfRange { index: usize, nvars: usize },
    #[error("expected {expected} substitution images, got {got}")]
    ImageCount { expected: usize, got: usize },
}
