//! Instance generation, essentiality checks, witness construction and the
//! seeded property suite behind the `essmod` binary.

pub mod commands;
pub mod error;
pub mod gen;
pub mod instance;
pub mod random;
pub mod report;
pub mod rng;
pub mod suite;
