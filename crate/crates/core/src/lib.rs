//! Invariants and automorphism groups of Cartan modular curves.

pub mod arith;
pub mod characters;
pub mod classify;
pub mod cosets;
pub mod decomposition;
pub mod error;
pub mod groups;
pub mod invariants;
pub mod newforms;
pub mod tables;

pub use arith::{Mat2, Modulus, QuadDiscriminant};
pub use error::{Error, Result};
pub use groups::{CartanType, SubgroupHandle, SubgroupSpec};
