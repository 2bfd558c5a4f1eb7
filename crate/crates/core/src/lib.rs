//! Exact computations around log-concave sequences arising in algebraic
//! geometry and combinatorics: chromatic and characteristic polynomials,
//! mixed multiplicities of monomial ideals, mixed volumes, Milnor classes
//! and representability of homology classes in products of projective spaces.

pub mod formats;
pub mod graph;
pub mod homclass;
mod linalg;
pub mod matroid;
pub mod milnor;
pub mod monomial;
pub mod poly;
pub mod polytope;
pub mod seq;

pub use poly::IntPolynomial;
pub use seq::{Sequence, SequenceReport};
