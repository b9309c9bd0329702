//! Young diagrams in any dimension, filtrations, set partitions and the
//! exponential transform relating connected and total counts.

mod bell;
mod filtration;
mod partition;
mod young;

use thiserror::Error;

pub use bell::{bell_transform, coefficient_context, log_transform, severi_count, symbolic_coefficients};
pub use filtration::DimensionVector;
pub use partition::{merge_partition, set_partitions, sieve_coefficient, SetPartition};
pub use young::DiagramND;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("diagram has no boxes")]
    Empty,
    #[error("diagrams must have dimension at least 1")]
    ZeroDimension,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("box {0:?} is present but one of its predecessors is not")]
    NotDownwardClosed(Vec<u32>),
    #[error("{0:?} is not a non-increasing sequence")]
    NotAPartition(Vec<u32>),
    #[error("cannot parse diagram '{0}'")]
    Parse(String),
    #[error("invalid set partition: {0}")]
    InvalidPartition(String),
    #[error("partition has {blocks} blocks, merge pattern expects {expected}")]
    BlockCountMismatch { blocks: usize, expected: usize },
    #[error("filtration has {total} entries in total; an algebra of dimension {k} needs k-1")]
    FiltrationMismatch { total: usize, k: usize },
}
