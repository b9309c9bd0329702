//! Residue problems for tautological integrals: punctual and multi-point
//! geometric subsets, geometric Hilbert schemes and Severi degrees, plus
//! their evaluation to intersection numbers.

mod block;
mod eval;
mod geometric;
mod punctual;
mod severi;

use thiserror::Error;

use crate::chern::ChernError;
use crate::diagram::DiagramError;
use crate::poly::PolyError;
use crate::residue::{ResidueError, ResidueProblem};

pub use block::{structural_summary, StructuralSummary};
pub use eval::{evaluate, evaluate_terms, evaluate_with, Evaluation, TermsEvaluation};
pub use geometric::{assemble_geometric, assemble_ghilb, BlockDuals, GeometricSubsetSpec, GeometricTerm};
pub use punctual::{assemble_punctual, AlgebraSpec};
pub use severi::{assemble_severi, severi_example_verbatim, severi_variable_names};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AssembleError {
    #[error("filtration sums to {total}, algebra of dimension {k} needs {}", k.saturating_sub(1))]
    WeightInconsistency { total: usize, k: usize },
    #[error("ePD is not homogeneous in the residue variables: {0}")]
    InhomogeneousEpd(String),
    #[error("no dual is known for block {block:?} with algebra dimensions {dims:?}")]
    MissingDual { block: Vec<usize>, dims: Vec<usize> },
    #[error("block dual {0} must be a monomial")]
    NonMonomialDual(String),
    #[error("block {0:?} merges an algebra without a diagram; its sum algebra is unresolvable")]
    UnresolvableSum(Vec<usize>),
    #[error("Severi problems need r >= 1, got {0}")]
    SeveriRange(usize),
    #[error("invalid specification: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Residue(#[from] ResidueError),
    #[error(transparent)]
    Chern(#[from] ChernError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// A residue problem together with the bookkeeping needed to integrate it.
#[derive(Debug, Clone)]
pub struct Assembled {
    pub problem: ResidueProblem,
    /// Copies of `X` the geometry symbols live on.
    pub copies: usize,
    /// Residue variable names per block, in contour order.
    pub blocks: Vec<Vec<String>>,
    /// Root symbol names per copy, for the integration step.
    pub line: Option<String>,
    pub warnings: Vec<String>,
}
