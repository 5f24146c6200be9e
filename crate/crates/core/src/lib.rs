//! Layered tree forests on regular `{p,q}` mosaics.
//!
//! The crate builds the mosaic belt by belt as a rotation-system planar map
//! ([`mosaic`]), grows the layered forest on it ([`forest`]), and checks the
//! resulting vertex counts against the exact two-term recursion and its
//! spectral closed form ([`recurrence`]) and the root-level distributions
//! ([`probability`]).

pub mod cli;
pub mod error;
pub mod forest;
pub mod mosaic;
pub mod probability;
pub mod quadratic;
pub mod recurrence;
pub mod symbol;
pub mod verify;

pub use error::{Error, Result};
pub use quadratic::QuadraticNumber;
pub use recurrence::{LayerCounts, Sequence, SpectralConstants};
pub use symbol::{Geometry, SchlafliSymbol};
