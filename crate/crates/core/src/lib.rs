//! Essential and topologically essential submodules, made computable.
//!
//! Three layers share one vocabulary:
//!
//! * [`algebra`]: right ideals of `A = ⊕ᵢ M_{nᵢ}` with functional calculus
//!   and spectral projections (floating point, tolerance `1e-10·(1+‖a‖)`);
//! * [`module`]: the free Hilbert module `A^k`, the operators `Θ_{x,y}` and
//!   the correspondence between submodules and right ideals of `M_k(A)`;
//! * [`field`]: continuous fields of subspaces over `[0, 1]` in exact
//!   Gaussian-rational arithmetic, the defect sets and the nowhere-density
//!   criterion with its witness constructions.

pub mod algebra;
pub mod error;
pub mod field;
pub mod module;
pub mod numeric;

pub use error::{Error, Result};
