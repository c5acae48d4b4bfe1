//! Exact scalar arithmetic and dense linear algebra.

mod mat;
mod scalar;

pub use mat::{kernel_basis, rref, solve_affine, AffineSolution, Mat, PreparedSystem, Rref, Subspace};
pub use scalar::{Field, Scalar, DEFAULT_PRIME};
