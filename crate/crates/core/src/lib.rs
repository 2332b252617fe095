//! Loop linking numbers of complex line arrangements, computed exactly.
//!
//! The crate covers exact number-field arithmetic with certified signs, projective line
//! arrangements and their combinatorics, the tensor linking group as a modular kernel,
//! braided wiring diagrams, the two methods for upper-linking numbers, the loop linking
//! number with its automorphism orbit, and ordered unions of arrangements.

pub mod arrangement;
pub mod braid;
pub mod combinatorics;
pub mod dataset;
pub mod error;
pub mod linking;
mod modlin;
pub mod numberfield;
pub mod perm;
pub mod tlg;
pub mod union;

pub use error::{Error, Result};
pub use modlin::is_prime;
