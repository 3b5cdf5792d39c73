//! Couplings between the random graph process and binomial random graphs:
//! the multi-stage coupling, its single-stage sandwich specialisation,
//! chi-square validators against exactly enumerated laws, and an exact
//! check of the Harris–FKG inequality on small vertex sets.

mod fkg;
mod multistage;
mod validate;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CouplingError {
    #[error("parameter error: {0}")]
    Parameter(String),
}

pub use fkg::{check_fkg_exact, fkg_catalogue_pairs, increasing_catalogue, is_increasing, FkgReport, Predicate};
pub use multistage::{
    default_probabilities, sample_multistage, sample_sandwich, MultistageSample, SandwichSample,
};
pub use validate::{
    chi_square, exact_stage_law, graph_mask, validate_multistage, validate_sandwich_marginal, ChiSquareReport,
};
