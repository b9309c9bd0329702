//! Symbolic evaluation of tautological integrals over geometric subsets of
//! Hilbert schemes of points, via iterated residues at infinity.
//!
//! The pieces, bottom-up:
//!
//! - [`poly`]: exact sparse Laurent polynomials and affine linear forms.
//! - [`residue`]: iterated residues at infinity and the Grassmannian
//!   fixed-point oracle.
//! - [`diagram`]: Young diagrams, curvilinear sums, set partitions, the
//!   exponential (Bell) transform.
//! - [`multidegree`]: multidegrees of monomial ideals and the table of
//!   Nakajima duals.
//! - [`chern`]: twisted Chern roots, elementary symmetric polynomials,
//!   Segre factors, top-degree selection.
//! - [`assemble`]: residue problems for punctual and multi-point geometric
//!   subsets, geometric Hilbert schemes and Severi degrees.
//! - [`config`]: the line-oriented problem file format.
//! - [`verify`]: the built-in verification suite.

pub mod assemble;
pub mod chern;
pub mod config;
pub mod diagram;
pub mod multidegree;
pub mod poly;
pub mod residue;
pub mod verify;
