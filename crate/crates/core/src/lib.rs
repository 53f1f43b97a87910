//! Exact convex-layer ("onion") peeling of integer point sets, specialised
//! for centered grids `[-n, n]^d`, together with the two certificates that
//! bound a grid's layer number from above and below.

pub mod certify;
pub mod error;
pub mod hull;
pub mod peel;
pub mod point;
mod ring;
pub mod symmetry;

pub use certify::{
    build_chain_certificate, build_norm_certificate, convex_witness_for_prec, lower_bound, prec,
    upper_bound, Certificate, ChainCertificate, Defect, NormDescentCertificate,
};
pub use error::{Error, Result};
pub use hull::{
    brute_force_is_extreme, extreme_points, is_extreme, ConvexCombinationWitness, Extremeness,
    ExtremenessQuery,
};
pub use peel::{
    layer_max_norm_sq, peel, peel_2d, peel_generic, peel_with, Engine, LayerAssignment,
};
pub use point::{from_centered, norm_sq, to_centered, Grid, Point, PointSet, Scalar};
pub use symmetry::{
    as_centered_grid, canonicalize, orbit_of, peel_orbits, peel_orbits_set, Orbit,
    SignedPermutation,
};
