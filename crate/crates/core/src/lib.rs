//! Finite-window tools for Ramsey theory and additive combinatorics on
//! `ℕ = {1, 2, ...}`: bitset ground sets, exact densities, syndetic / thick /
//! piecewise syndetic classification, van der Waerden search, self-similar
//! fractal sets, difference sets and a finite ultrafilter laboratory.

pub mod constructions;
pub mod density;
pub mod differences;
pub mod error;
pub mod filter_lab;
pub mod ground_set;
pub mod ramsey;
pub mod selftest;
pub mod structure;

pub use error::{Error, Result};
pub use ground_set::{GroundSet, Interval};
