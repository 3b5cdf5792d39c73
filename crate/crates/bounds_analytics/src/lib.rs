//! Budget exponents of successful strategies as affine functions of
//! `x = log_n t`, their CSV rendering, and an empirical copy-count
//! statistic on a bought graph.

mod copies;
mod curves;
mod exponent;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error("capacity error: {0}")]
    Capacity(String),
}

pub use copies::{copy_count_statistic, copy_threshold, CopyCountReport};
pub use curves::{curve_table, CSV_HEADER};
pub use exponent::{budget_exponent, budget_exponent_exact, BoundFamily, BoundKind, BoundSpec};
