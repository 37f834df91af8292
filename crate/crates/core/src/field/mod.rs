//! Continuous fields of subspaces over `[0, 1]`, with exact rational arithmetic.

pub mod criterion;
pub mod exact;
pub mod poly;
pub mod rational;
pub mod section;
pub mod subset;
pub mod subspace;
pub mod witness;

pub use criterion::{commutative_limit_identity, is_essential_field, residual_set, total_defect_set, DefectReport, FieldEssentiality};
pub use poly::{GPoly, QPoly, RealRoot};
pub use rational::{fmt_q, parse_q, GQ, Q};
pub use section::PiecewiseSection;
pub use subset::{Interval, SymbolicSubset};
pub use subspace::{Boundary, FieldModuleSpec, FieldPiece, SubspaceField};
pub use witness::{
    dyadic_samples, essential_witness, generator_scale, inductive_witness_section, non_essential_witness, EssentialWitness,
    InductiveWitness, NonEssentialWitness,
};
