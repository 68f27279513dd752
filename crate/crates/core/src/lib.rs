//! Exact admissible-exponent polytopes for Heisenberg-group Brascamp-Lieb
//! forms, together with numerical validation utilities (box witnesses, grid
//! measure brackets, Monte Carlo quadrature).

pub mod conditions;
pub mod frames;
pub mod heisenberg;
pub mod linalg;
pub mod polytope;
pub mod rat;

pub use linalg::{CoordinateSubspace, LinalgError, RationalMatrix, Subspace};
pub use rat::Rat;
