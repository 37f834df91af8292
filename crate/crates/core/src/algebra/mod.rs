//! Finite-dimensional C*-algebras `A = ⊕ᵢ M_{nᵢ}` in their defining
//! representation.
//!
//! Here the bicommutant of `A` is `A` itself, so every projection is open
//! and the closed right ideals are exactly the sets `pA`. Monotone strong
//! limits become norm limits, which is what [`lower_approximants`] exhibits.

mod calculus;
mod element;
mod ideal;

pub use calculus::{
    calculus, lower_approximants, ramp, shifted_positive_part, spectral_projection, spectrum, sqrt_fn, RealFunction,
    Restricted,
};
pub use element::{AlgebraElement, AlgebraShape};
pub use ideal::{
    closed_subideal, closed_subideal_with, ideal_from_projection, ideal_support_projection, is_essential_right_ideal,
    subideal_cutoff, ClosedSubideal, EpsRule, IdealCertificate, IdealEssentiality, RightIdeal,
};
