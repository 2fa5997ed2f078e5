//! Low-dimensional polytope and zonotope geometry: support functions,
//! support sets, mixed volumes, mixed area measures, projections, sections.
//! Hulls and volumes are limited to dimension 4.

pub(crate) mod hull;
mod io;
mod measure;
mod polytope;
mod subspace;
mod zonotope;

pub use io::{parse_body, Body};
pub use measure::{
    mixed_area_measure, mixed_area_measure_in, mixed_spherical_lifting, mixed_volume, mixed_volume_in,
    surface_area_measure, surface_area_measure_relative, DiscreteSphericalMeasure, MAX_DIM,
};
pub use polytope::{Polytope, PolytopeFacet, MERGE_TOL};
pub use subspace::{basis, Subspace, Vector};
pub use zonotope::Zonotope;
