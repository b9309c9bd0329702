//! Iterated residues at infinity of rational forms with affine linear
//! denominators.

mod engine;
mod grassmann;
mod laurent;

use thiserror::Error;

use crate::poly::PolyError;

pub use engine::{
    iterated_residue, iterated_residue_with, ResidueOptions, ResidueProblem, ResidueStats,
    DEFAULT_TERM_BUDGET,
};
pub use grassmann::{
    block_monomial, flag_context, grassmann_fixed_point_sum, grassmann_residue_problem,
    lambda_context,
};
pub use laurent::{expand_inverse_at_infinity, LaurentSeries};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResidueError {
    #[error("'{var}' is not the leading variable of {form}")]
    NotLeadingVariable { form: String, var: String },
    #[error("malformed denominator factor {0}")]
    Malformed(String),
    #[error("denominator factor {0} is a non-invertible constant")]
    NonInvertibleConstant(String),
    #[error("Laurent prefactor {0} has a positive residue exponent")]
    PositiveLaurentExponent(String),
    #[error("{0} belongs to a different variable context")]
    ContextMismatch(String),
    #[error("term budget exceeded: {terms} terms > {budget}")]
    TermBudgetExceeded { terms: usize, budget: usize },
    #[error("invalid Grassmannian Grass_{d}(C^{n})")]
    InvalidGrassmannian { n: usize, d: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
}
