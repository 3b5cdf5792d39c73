use std::panic::{catch_unwind, AssertUnwindSafe};

use graph_core::{complete_edge_count, sample_process_prefix, EdgeSequence, Graph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::seeds::child_seed;
use crate::strategy::{
    DecisionHistory, FinalView, PropertyChecker, StageRecord, StepView, Strategy, StrategyReport, Witness,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProcessError {
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error("strategy \"{strategy}\" returned purchase probability {value} at step {time}")]
    StrategyContract { strategy: String, time: usize, value: f64 },
}

/// Result of one trial. `history` is empty when the batch did not ask to
/// keep it.
#[derive(Clone, Debug)]
pub struct TrialOutcome {
    pub index: usize,
    pub seed: u64,
    pub strategy: String,
    pub n: usize,
    pub t: usize,
    pub budget: usize,
    pub budget_used: usize,
    pub success: bool,
    pub errored: Option<String>,
    pub stage_log: Vec<StageRecord>,
    pub witness: Option<Witness>,
    pub history: DecisionHistory,
    pub final_bought: Graph,
    pub final_presented: Graph,
}

/// One JSON-lines record of a trial.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    pub strategy: String,
    pub n: usize,
    pub t: usize,
    pub budget: usize,
    pub budget_used: usize,
    pub success: bool,
    pub errored: Option<String>,
    pub stage_log: Vec<StageRecord>,
}

impl TrialOutcome {
    pub fn record(&self) -> TrialRecord {
        TrialRecord {
            trial: self.index,
            seed: self.seed,
            strategy: self.strategy.clone(),
            n: self.n,
            t: self.t,
            budget: self.budget,
            budget_used: self.budget_used,
            success: self.success,
            errored: self.errored.clone(),
            stage_log: self.stage_log.clone(),
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(&self.record()).expect("trial records always serialize")
    }

    fn failed_to_run(index: usize, seed: u64, strategy: &str, n: usize, t: usize, budget: usize, error: String) -> Self {
        TrialOutcome {
            index,
            seed,
            strategy: strategy.to_string(),
            n,
            t,
            budget,
            budget_used: 0,
            success: false,
            errored: Some(error),
            stage_log: Vec::new(),
            witness: None,
            history: DecisionHistory::default(),
            final_bought: Graph::empty(n),
            final_presented: Graph::empty(n),
        }
    }
}

fn decision_rng(seed: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    rng
}

/// Runs one trial whose edge order is drawn from `seed`; purchase draws use
/// an independent stream of the same seed.
pub fn run_trial(
    n: usize,
    t: usize,
    strategy: &mut dyn Strategy,
    checker: &dyn PropertyChecker,
    seed: u64,
    keep_history: bool,
) -> Result<TrialOutcome, ProcessError> {
    let mut process_rng = ChaCha8Rng::seed_from_u64(seed);
    let sequence = sample_process_prefix(n, t, &mut process_rng).map_err(|e| ProcessError::Parameter(e.to_string()))?;
    run_trial_on_sequence(&sequence, strategy, checker, seed, keep_history)
}

/// Runs a trial on a fixed presentation order.
pub fn run_trial_on_sequence(
    sequence: &EdgeSequence,
    strategy: &mut dyn Strategy,
    checker: &dyn PropertyChecker,
    seed: u64,
    keep_history: bool,
) -> Result<TrialOutcome, ProcessError> {
    let n = sequence.n();
    let t = sequence.len();
    let budget = strategy.budget();
    let mut rng = decision_rng(seed);
    let mut history = DecisionHistory {
        presented: Vec::with_capacity(t),
        purchases: Vec::with_capacity(t),
    };
    let mut bought = Graph::empty(n);
    let mut presented = Graph::empty(n);
    for (i, &edge) in sequence.edges().iter().enumerate() {
        let mut buy = false;
        if bought.edge_count() < budget {
            let view = StepView {
                n,
                total_steps: t,
                time: i + 1,
                edge,
                history: &history,
                bought: &bought,
                presented: &presented,
                budget,
            };
            let probability = strategy.decide(&view);
            if !(0.0..=1.0).contains(&probability) {
                return Err(ProcessError::StrategyContract {
                    strategy: strategy.name().to_string(),
                    time: i + 1,
                    value: probability,
                });
            }
            buy = if probability == 1.0 {
                true
            } else if probability == 0.0 {
                false
            } else {
                rng.gen::<f64>() < probability
            };
        }
        if buy {
            bought.add_edge(edge.0, edge.1);
        }
        presented.add_edge(edge.0, edge.1);
        history.presented.push(edge);
        history.purchases.push(buy);
        assert!(bought.edge_count() <= budget.min(i + 1), "engine exceeded the purchase budget");
    }
    let report = strategy.finish(&FinalView { n, total_steps: t, history: &history, bought: &bought, presented: &presented, budget });
    let verdict = catch_unwind(AssertUnwindSafe(|| checker.check(&bought, &report)))
        .unwrap_or_else(|_| Err(format!("checker \"{}\" panicked", checker.name())));
    let (success, errored) = match verdict {
        Ok(s) => (s, None),
        Err(message) => (false, Some(message)),
    };
    let StrategyReport { stage_log, witness } = report;
    Ok(TrialOutcome {
        index: 0,
        seed,
        strategy: strategy.name().to_string(),
        n,
        t,
        budget,
        budget_used: bought.edge_count(),
        success,
        errored,
        stage_log,
        witness,
        history: if keep_history { history } else { DecisionHistory::default() },
        final_bought: bought,
        final_presented: presented,
    })
}

const WORKER_STACK_BYTES: usize = 64 << 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BatchConfig {
    pub n: usize,
    pub t: usize,
    pub trials: usize,
    pub keep_history: bool,
    /// Worker threads; `0` lets rayon choose.
    pub jobs: usize,
}

/// Runs `config.trials` independent trials. Trial `i` uses
/// `child_seed(master_seed, i)`, so outcomes do not depend on `jobs`.
pub fn run_batch(
    config: &BatchConfig,
    master_seed: u64,
    make_strategy: &(dyn Fn(usize) -> Box<dyn Strategy> + Sync),
    checker: &dyn PropertyChecker,
) -> Result<Vec<TrialOutcome>, ProcessError> {
    let total = complete_edge_count(config.n);
    if config.t > total {
        return Err(ProcessError::Parameter(format!("t = {} exceeds M = {total} for n = {}", config.t, config.n)));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        // Strategies may run deep recursive searches at stage ends.
        .stack_size(WORKER_STACK_BYTES)
        .build()
        .map_err(|e| ProcessError::Parameter(format!("cannot start worker pool: {e}")))?;
    let outcomes = pool.install(|| {
        (0..config.trials)
            .into_par_iter()
            .map(|index| {
                let seed = child_seed(master_seed, index as u64);
                let mut strategy = make_strategy(index);
                let result = run_trial(config.n, config.t, strategy.as_mut(), checker, seed, config.keep_history);
                match result {
                    Ok(mut outcome) => {
                        outcome.index = index;
                        outcome
                    }
                    Err(e) => TrialOutcome::failed_to_run(
                        index,
                        seed,
                        strategy.name(),
                        config.n,
                        config.t,
                        strategy.budget(),
                        e.to_string(),
                    ),
                }
            })
            .collect()
    });
    Ok(outcomes)
}

/// Re-runs the recorded presentation order through `strategy` with the
/// trial's seed and returns the purchase bits.
pub fn replay_purchases(outcome: &TrialOutcome, strategy: &mut dyn Strategy) -> Result<Vec<bool>, ProcessError> {
    let sequence = EdgeSequence::new(outcome.n, outcome.history.presented.clone())
        .map_err(|e| ProcessError::Parameter(e.to_string()))?;
    let accept_all = crate::FnChecker::new("replay", |_: &Graph| true);
    let replayed = run_trial_on_sequence(&sequence, strategy, &accept_all, outcome.seed, true)?;
    Ok(replayed.history.purchases)
}

/// Checks the process invariants of a trial whose history was kept: bought
/// graphs are nested, `e(B_i) <= min(i, b)`, `B_t ⊆ G_t`, and the final
/// graphs agree with the history.
pub fn verify_outcome_invariants(outcome: &TrialOutcome) -> Result<(), String> {
    let history = &outcome.history;
    if history.presented.len() != outcome.t || history.purchases.len() != outcome.t {
        return Err(format!("history covers {} of {} steps", history.presented.len(), outcome.t));
    }
    let mut bought = Graph::empty(outcome.n);
    let mut presented = Graph::empty(outcome.n);
    for (i, (&(u, v), &buy)) in history.presented.iter().zip(&history.purchases).enumerate() {
        if !presented.add_edge(u, v) {
            return Err(format!("edge ({u}, {v}) presented twice"));
        }
        // Bought graphs only grow, and each purchase is the edge just presented.
        if buy && !bought.add_edge(u, v) {
            return Err(format!("edge ({u}, {v}) bought twice at step {}", i + 1));
        }
        if bought.edge_count() > outcome.budget.min(i + 1) {
            return Err(format!("{} purchases after {} steps exceed budget {}", bought.edge_count(), i + 1, outcome.budget));
        }
    }
    if !bought.is_subgraph_of(&presented) {
        return Err("bought graph is not contained in the presented graph".into());
    }
    if bought != outcome.final_bought || presented != outcome.final_presented {
        return Err("final graphs disagree with the history".into());
    }
    if outcome.budget_used != bought.edge_count() || outcome.budget_used > outcome.budget {
        return Err(format!("budget_used {} inconsistent with budget {}", outcome.budget_used, outcome.budget));
    }
    Ok(())
}
