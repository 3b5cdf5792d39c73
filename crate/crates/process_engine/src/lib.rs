//! The budget-constrained random graph process.
//!
//! A trial presents `t` uniformly random distinct edges of `K_n` one at a
//! time. While fewer than `b` edges have been bought, the strategy is asked
//! for a purchase probability for the incoming edge; the engine draws the
//! Bernoulli decision itself, so strategies never see edges beyond the one
//! currently offered and can never exceed the budget.

mod engine;
mod seeds;
mod strategy;

pub use engine::{
    replay_purchases, run_batch, run_trial, run_trial_on_sequence, verify_outcome_invariants, BatchConfig,
    ProcessError, TrialOutcome, TrialRecord,
};
pub use seeds::child_seed;
pub use strategy::{
    DecisionHistory, FinalView, FnChecker, PropertyChecker, StageRecord, StepView, Strategy, StrategyReport, Witness,
};
