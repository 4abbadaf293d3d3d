//! Exact enumeration of lattice polymers (animals, trees, walks, polygons,
//! combs) in `Z^d` near the hyperplane `x_1 = 0`, quenched topology keys,
//! and finite-N annealed/quenched thermodynamics over visit histograms.

pub mod constructs;
pub mod enumerate;
pub mod error;
mod grid;
pub mod lattice;
pub mod statmech;
pub mod topology;

pub use enumerate::{
    count_by_topology, enumerate, max_topology_class, Boundary, Convention, EnsembleSpec,
    EnumerationSummary, Histogram, TopologyTable,
};
pub use error::{Error, Result};
pub use lattice::{Point, Polymer, PolymerClass};
pub use topology::{CombSignature, KnotInvariant, TopologyKey};

/// Bumped whenever an algorithm change could alter any computed result.
pub const ENGINE_VERSION: &str = concat!("polylat-", env!("CARGO_PKG_VERSION"), "+e1");
