//! Dense complex linear algebra for the finite-dimensional layers.

mod eigen;
mod matrix;
mod subspace;

pub use eigen::{herm_eig, is_psd, op_norm, scaled_tol, HermEig, DEFAULT_TOL};
pub use matrix::{CMatrix, C64};
pub use subspace::Subspace;
