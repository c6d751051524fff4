//! Finite groups given by Cayley tables, restricted and twisted sumsets, and
//! exhaustive or sampled checks of sumset lower bounds.

pub mod arith;
pub mod bits;
pub mod catalog;
pub mod error;
pub mod field;
pub mod group;
pub mod harness;
pub mod matching;
pub mod morphisms;
pub mod nullstellensatz;
pub mod reports;
pub mod structure;
pub mod sumset;

pub use bits::{Bits, MAX_ORDER};
pub use error::{Error, Result};
pub use field::FiniteField;
pub use group::{FiniteGroup, GroupDefinition, GroupLimits, GroupSubset};
pub use morphisms::{Automorphism, AutomorphismGroup, QuotientStructure};
pub use sumset::{BoundKind, BoundSpec};
pub use harness::{Mode, Pruning, SearchPlan, Status, Theorem, VerificationReport};
