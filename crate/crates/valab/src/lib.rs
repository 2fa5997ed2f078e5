//! Numerics for convex valuations on polytopes and zonal spherical analysis.

pub mod berg;
pub mod convex;
mod dd;
pub mod error;
pub mod flags;
pub mod kernel;
mod jet;
pub mod special;
pub mod suites;
pub mod valuations;
pub mod zonal;

pub use error::{Error, Result};
