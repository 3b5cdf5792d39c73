//! Exact 1-density arithmetic for fixed pattern graphs.
//!
//! For a pattern `F` the 1-density is `e(F) / (v(F) - 1)` and the maximum
//! 1-density is the largest 1-density of a subgraph on at least two vertices.
//! All classification is done in exact rationals so that strict inequalities
//! never depend on rounding.

mod density;
mod equipartition;
mod flow;
mod named;

use graph_core::GraphError;
use num_rational::Rational64;
use thiserror::Error;

pub use density::{
    max_one_density, max_one_density_containing, one_density, is_strictly_one_balanced, is_vertex_balanced,
    PatternStats, MAX_PATTERN_VERTICES,
};
pub use equipartition::f_equipartition;
pub use flow::max_one_density_by_flow;
pub use named::{complete_pattern, parse_pattern, path_power};

/// Exact density value.
pub type Density = Rational64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error("capacity error: {0}")]
    Capacity(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Renders a density as `"num/den"`, or `"num"` when integral.
pub fn density_to_string(d: Density) -> String {
    if *d.denom() == 1 {
        d.numer().to_string()
    } else {
        format!("{}/{}", d.numer(), d.denom())
    }
}
