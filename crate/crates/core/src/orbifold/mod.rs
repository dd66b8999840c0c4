//! Weights, exact rationals and closed 2-orbifolds.

mod rational;
mod surface;
mod weight;

pub use rational::{ParseRationalError, Rational};
pub use surface::{
    classify_2orbifold, cover_char, orb_char, vertex_char, ComponentClass, Geometry, OrbSurface,
    SurfaceComponent, VertexTriple,
};
pub use weight::{weight_reciprocal, DiscWeight, Weight, WeightError};
