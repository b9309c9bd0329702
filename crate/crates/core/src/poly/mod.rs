//! Exact sparse Laurent polynomials over an ordered variable context.

mod context;
mod linear;
mod monomial;
mod mpoly;
mod parse;

use num_bigint::BigInt;
use thiserror::Error;

pub use context::{ContextBuilder, GeometrySymbol, GradingSpec, VariableContext};
pub use linear::LinearForm;
pub use monomial::Monomial;
pub use mpoly::{monomial_string, MPoly};

pub type Rational = num_rational::BigRational;

/// Shorthand for a small rational constant.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("operands belong to different variable contexts")]
    ContextMismatch,
    #[error("unknown variable '{0}'")]
    UnknownVariable(String),
    #[error("duplicate variable '{0}'")]
    DuplicateVariable(String),
    #[error("invalid variable name '{0}'")]
    InvalidName(String),
    #[error("too many variables ({0})")]
    TooManyVariables(usize),
    #[error("weights must be given for every residue variable or none")]
    PartialWeights,
    #[error("residue weights decrease at position {position}")]
    NonMonotoneWeights { position: usize },
    #[error("parse error at offset {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("'{0}' is not invertible as a Laurent monomial")]
    NonInvertible(String),
    #[error("'{0}' is not an affine linear form in the residue variables")]
    NotLinear(String),
    #[error("linear form is identically zero")]
    ZeroForm,
    #[error("multiplicity must be positive")]
    ZeroMultiplicity,
    #[error("division leaves a nonzero remainder")]
    NonExactDivision,
}
