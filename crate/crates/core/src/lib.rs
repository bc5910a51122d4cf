//! Permutations attached to the fractional parts `{iα}` and their
//! characterisation by a congruential recurrence.
//!
//! The crate enumerates the solution sets of the recurrence and its
//! relatives, builds them level by level with integer-only degree lifting,
//! relates them to Farey intervals through Sós permutations, and checks the
//! resulting identities exhaustively for small degrees.

pub mod class;
pub mod error;
pub mod farey;
pub mod fraction;
pub mod lifting;
pub mod perm;
pub mod report;
pub mod sets;
pub mod sos;
pub mod trees;

pub use class::{shift_closure, Label, PermClass};
pub use error::{Error, Result};
pub use fraction::Fraction;
pub use perm::{CdsSet, Delta, Permutation};
pub use report::{Check, Report};
