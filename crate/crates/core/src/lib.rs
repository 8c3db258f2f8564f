//! Ramification structures on finite groups: a small group engine, p-group
//! invariants, spherical systems, closed-form size predictions, constructions
//! and an exhaustive search oracle.

pub mod bundled;
pub mod constructors;
pub mod element;
pub mod error;
pub mod generation;
pub mod group;
pub mod invariants;
pub mod literal;
pub mod numtheory;
pub mod oracle;
pub mod spec;
pub mod structures;
pub mod theory;

#[cfg(test)]
mod testing;

pub use element::{Element, ElementSet};
pub use error::{Error, Result};
pub use group::{FiniteGroup, Quotient, Realization};
pub use spec::GroupSpec;
