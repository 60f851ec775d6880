//! Exact computations with interval exchange transformations.
//!
//! Every number is a [`Scalar`]: a rational combination of 1 and declared
//! irrational symbols, compared through numeric witnesses. On top of that
//! the crate provides permutations, the block-rotation groups `G_n`, general
//! interval exchanges with periodic/minimal decomposition, the SAF invariant,
//! involution factorizations and checks for small group actions.
//!
//! Composition is apply-right-first everywhere: `compose(f, g)` is `f ∘ g`.

pub mod actions;
pub mod error;
pub mod gn;
pub mod iet;
pub mod perm;
pub mod revfact;
pub mod saf;
pub mod scalar;
pub mod text;

#[cfg(test)]
mod testutil;

pub use error::{Error, Result};
pub use gn::GnElement;
pub use iet::Iet;
pub use perm::Permutation;
pub use scalar::{CircleValue, Scalar, SymbolTable};
