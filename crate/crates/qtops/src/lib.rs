//! Quasitrivial binary operations on finite sets `{1, …, n}`: property
//! checks, the canonical weak-ordering construction and its inverse,
//! counting sequences, brute-force enumeration, and an exhaustive
//! verification suite for the structural results tying them together.

pub mod construct;
pub mod enumerate;
pub mod optable;
pub mod order;

#[cfg(test)]
mod testutil;

pub use optable::{OpTable, PropertyReport};
pub use order::{LinearOrder, WeakOrder};
