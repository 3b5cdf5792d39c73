//! Exact optimal success probabilities of `(t, b)`-strategies on graphs
//! with at most four vertices.
//!
//! [`solve`] runs backward induction over states `(presented set, bought
//! set)`, which suffices because the next edge is uniform over the
//! unpresented ones. [`decision_tree_value`] and [`brute_force_value`]
//! recompute the same optimum over full ordered histories and over explicit
//! deterministic strategies respectively.

mod induction;
mod policy;
mod routes;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error("capacity error: {0}")]
    Capacity(String),
}

pub use induction::{buy_all_value, optimal_success, solve, OracleDump, OracleTable, MAX_ORACLE_VERTICES};
pub use policy::{simulate_policy_value, simulate_strategy_value, OraclePolicy, RandomizedStrategy};
pub use routes::{brute_force_value, decision_tree_value, BRUTE_FORCE_POINT_CAP};
