//! Undirected simple graphs on dense 0-based vertex ids, the canonical edge
//! index used for reproducible sampling, and the three random models of the
//! simulator: uniform process prefixes, `G(n, m)` and `G(n, p)`.

mod bitset;
mod edges;
mod error;
mod graph;
mod sampling;

pub use bitset::VertexSet;
pub use edges::{complete_edge_count, edge_from_index, edge_index, normalize, Edge, EdgeSequence};
pub use error::GraphError;
pub use graph::Graph;
pub use sampling::{sample_gnm, sample_gnp, sample_process_prefix};
