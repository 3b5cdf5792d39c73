//! Machinery for buying the `k`-th power of a Hamilton cycle: absorber
//! gadgets, endsequence linkages, sparse-partition matching, stage
//! parameters, the four-stage strategy and the absorption step.
//!
//! The stage logic lives in [`StageMachine`], which works on any bought
//! graph; [`HamPowerStrategy`] drives it from the random process.

mod absorber;
mod linkage;
mod matching;
mod params;
mod search;
mod stages;
mod strategy;
mod verify;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HamError {
    #[error("parameter error: {0}")]
    Parameter(String),
    /// An internal invariant failed; always a bug.
    #[error("construction error: {0}")]
    Construction(String),
    #[error("capacity exceeded: {0}")]
    Capacity(String),
}

pub use absorber::{
    build_absorber_template, find_ell0, path_power_edges, spine_length, Absorber, EmbeddedAbsorber,
};
pub use linkage::{
    find_linkage, find_linkage_family, EndsequencePair, Linkage, SearchOutcome, DEFAULT_LINKAGE_BUDGET,
};
pub use matching::{hopcroft_karp, satisfies_threshold, sparse_partition_match, sparseness_estimate};
pub use params::{derive_params, path_power_max_density, HamPowerConfig, HamPowerParams};
pub use search::{find_template_factor, TemplateEmbedder};
pub use stages::{absorb, Layout, Setup, StageMachine, Trace};
pub use strategy::{run_ham_power_batch, HamPowerStrategy, HamPowerTrial};
pub use verify::{verify_trace, StageVerdict};
