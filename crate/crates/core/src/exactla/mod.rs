//! Exact dense linear algebra over the rationals.

pub mod elim;
pub mod jordan;
pub mod matrix;
pub mod poly;
pub mod rational;
pub mod subspace;

pub use elim::{inverse, kernel_basis, rank, rref, solve_affine, Echelon};
pub use jordan::{jordan_semisimple_part, minimal_polynomial};
pub use matrix::Matrix;
pub use poly::Polynomial;
pub use rational::{Rational, Vector};
pub use subspace::{extend_to_complement, RowReducer, Subspace};
