//! Flat and hyperbolic backends: distances, minimum-distance configurations
//! and the per-level packing-count bounds.

mod configuration;
mod lattice;
mod model;
mod packing;
mod point;
mod sampling;

pub use configuration::{Center, Configuration, SEPARATION_SLACK};
pub use lattice::{hex_lattice, hex_ring, hyperbolic_level_packing, level_capacity};
pub use model::{GenericBounds, ManifoldModel};
pub use packing::{
    comparison_angle, packing_count_bound_exact, packing_count_bound_generic, packing_count_bound_relaxed,
};
pub use point::{distance, min_pairwise_distance_of, Point, DISK_LIMIT};
pub use sampling::poisson_disk_sample;
