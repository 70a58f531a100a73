//! Finite multigraphs, edge-set bitmasks, connectivity and the cycle space.

mod cycles;
mod edgeset;
#[allow(clippy::module_inception)]
mod graph;

pub use cycles::{
    cycle_basis_of, cycle_space_basis, cyclic_edges, even_subgraphs, even_subgraphs_of, CycleBasis,
    EvenSubgraphs,
};
pub use edgeset::{EdgeIter, EdgeSet, MAX_EDGES};
pub use graph::{
    generalized_theta, theta_segments, Components, DisjointSets, Graph, Limits, Marks,
};
