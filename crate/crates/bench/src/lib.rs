//! Shared inputs for the benchmarks.

use geproci_core::geproci::{project, PlanarConfig, IMAGE_PLANE};
use geproci_core::halfgrid::{standard_halfgrid, Config, HalfGridVariant};
use geproci_core::exactalg::FieldContext;
use geproci_core::projgeom::{Plane3, ProjPoint};

/// The full half grid for `m`.
pub fn full_halfgrid(m: u32) -> Config {
    standard_halfgrid(m, HalfGridVariant::Full).expect("standard half grid")
}

/// Image of `z` from a fixed center, ready for certification.
pub fn planar_image(z: &Config) -> PlanarConfig {
    let q = FieldContext::get(1);
    let center = ProjPoint::from_ints(&q, &[17, -5, 3, 11]);
    project(z, &center, &Plane3::from_ints(&q, &IMAGE_PLANE)).expect("center off every secant")
}
