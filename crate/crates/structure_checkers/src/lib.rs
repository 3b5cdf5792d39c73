//! Exact checkers for the structures the strategies try to build.
//!
//! Copy counting uses backtracking embeddings of patterns with at most
//! [`MAX_PATTERN_VERTICES`] vertices. Factor and packing searches are exact
//! and report [`CheckError::Capacity`] instead of guessing when a search
//! bound is hit.

mod checkers;
mod components;
mod embed;
mod factor;
mod ham;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error("capacity exceeded: {0}")]
    Capacity(String),
}

pub use checkers::{ConnectivityChecker, FactorChecker, HamPowerChecker, MinDegreeChecker, PartialFactorChecker};
pub use components::{components_within, connected_components, is_connected, min_degree};
pub use embed::{
    automorphism_count, count_copies, count_copies_at, count_embeddings, is_embedding, MAX_PATTERN_VERTICES,
};
pub use factor::{
    default_vertex_cap, has_f_factor, has_f_factor_with, max_disjoint_copies, max_disjoint_copies_with,
    FactorWitness, SearchLimits,
};
pub use ham::{contains_path_power, verify_ham_power};
