//! Exact arithmetic substrate: rationals, polynomials, Laurent polynomials,
//! dense matrices and the linear algebra the rest of the crate relies on.

pub mod eigen;
pub mod lattice;
pub mod laurent;
pub mod linalg;
pub mod matrix;
pub mod poly;
pub mod rational;
mod ring;

pub use eigen::{charpoly, generalized_eigenspace, rational_eigenvalues, RationalEigenvalues};
pub use lattice::{laurent_inverse, lower_triangular_inverse, ColumnEchelon};
pub use laurent::LaurentPoly;
pub use linalg::{nullspace, row_reduce, Echelon, Subspace};
pub use matrix::{kronecker_sum, LaurentMatrix, Matrix, PolyMatrix, RatMatrix};
pub use poly::Poly;
pub use rational::{format_rational, parse_rational, Rational};
pub use ring::Ring;
