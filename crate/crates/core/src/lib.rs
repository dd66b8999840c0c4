//! Exact invariants and rewrite moves for multiple bridge surfaces in 3-orbifolds.

// Move errors carry exact rationals; they are cold-path values.
#![allow(clippy::result_large_err)]

pub mod bounds;
pub mod compressionbody;
pub mod decomposition;
pub mod harness;
pub mod moves;
pub mod orbifold;

pub use orbifold::{OrbSurface, Rational, SurfaceComponent, Weight};
