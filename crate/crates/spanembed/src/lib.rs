//! Spanning-subgraph embedding toolkit for random hosts.
//!
//! The pipeline: generate a bounded-degree, bounded-density target graph;
//! split it into a layered partition (an outer independent layer, 2-independent
//! peels, and the neighborhood layer that re-attaches them); carve a random
//! host into matching slices plus a disjoint clique family; then embed layer
//! by layer through Hall-type bipartite matchings. A rainbow variant embeds
//! into a randomly edge-colored host so that every target edge receives a
//! distinct color. A seeded sweep harness measures success rates over a grid
//! of edge probabilities and emits CSV.
//!
//! Everything randomized is driven by [`random::RandomSource`] labels, so runs
//! are bit-reproducible across platforms and thread schedules.

pub mod bipartite;
pub mod density;
pub mod embed;
pub mod girth;
pub mod graph;
pub mod hostplan;
pub mod indep;
pub mod partition;
pub mod rainbow;
pub mod random;
pub mod sweep;
pub mod target;

pub use density::{densest_subgraph, max_density};
pub use girth::{girth, shortest_cycle, Girth};
pub use graph::{ColoredGraph, Graph, GraphError, Vertex};
pub use indep::{degeneracy_order, k_independent_in_subset, k_independent_low_degree};
pub use random::{
    gcnp_generate, gcnp_split_generate, gnp_generate, gnp_split_generate, RandomSource,
};
