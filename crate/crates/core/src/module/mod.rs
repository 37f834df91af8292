//! The free Hilbert module `A^k` over a finite-dimensional C*-algebra.
//!
//! Finitely generated projective modules sit inside free ones, so only `A^k`
//! is modelled. Compact and adjointable operators coincide here and form
//! `M_k(A)`. Closed and arbitrary submodules coincide as well, so the
//! sequential form of topological essentiality reduces to its algebraic
//! form: for nonzero `m`, some `a` has `ma ∈ N` and `ma ≠ 0`.

mod element;
mod operator;
mod submodule;

pub use element::{inner_product, ModuleElement};
pub use operator::{theta, theta_action, CompactOperator};
pub use submodule::{
    ideal_of_submodule, is_essential_submodule, operator_in_ideal, reformulation_probe, submodule_of_ideal,
    ProbeResult, Submodule, SubmoduleEssentiality,
};
