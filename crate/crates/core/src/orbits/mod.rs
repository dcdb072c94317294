//! Relation families over `GF(q)`, their `GL(F(ξ₀))`-orbits, and the maps
//! `φ̄` and `Φ` into products of Grassmannians.

mod classify;
mod family;
mod group;

pub use classify::{
    classify, family_presentation, family_to_module, orbit_partition, pattern_label, projective, y_coordinates,
    Orbit, OrbitInfo, OrbitReport, XiClass, YCoordinate,
};
pub use family::{enumerate_families, gaussian_binomial, subspaces, RelationFamily, RelationShape};
pub use group::{group_generators, GroupElement};

/// Default cap on the estimated number of families.
pub const DEFAULT_BUDGET: u128 = 1 << 22;
