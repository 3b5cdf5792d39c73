use std::sync::Arc;

use couplings::graph_mask;
use graph_core::{complete_edge_count, edge_index};
use process_engine::{run_batch, BatchConfig, FnChecker, StepView, Strategy};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::induction::OracleTable;
use crate::OracleError;

/// The optimal deterministic policy read off an [`OracleTable`].
#[derive(Clone)]
pub struct OraclePolicy {
    table: Arc<OracleTable>,
}

impl OraclePolicy {
    pub fn new(table: Arc<OracleTable>) -> Self {
        OraclePolicy { table }
    }
}

impl Strategy for OraclePolicy {
    fn name(&self) -> &str {
        "oracle_policy"
    }

    fn budget(&self) -> usize {
        self.table.b
    }

    fn decide(&mut self, view: &StepView<'_>) -> f64 {
        let e = edge_index(view.edge.0, view.edge.1) as u32;
        let buy = self.table.buys(graph_mask(view.presented), graph_mask(view.bought), e);
        if buy {
            1.0
        } else {
            0.0
        }
    }
}

/// A strategy whose purchase probability depends on the time, the number
/// of edges bought so far and the offered edge, drawn once from a seed.
#[derive(Clone, Debug)]
pub struct RandomizedStrategy {
    budget: usize,
    edges: usize,
    probabilities: Vec<f64>,
}

impl RandomizedStrategy {
    pub fn from_seed(n: usize, t: usize, b: usize, seed: u64) -> Self {
        let edges = complete_edge_count(n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let probabilities = (0..t * (b + 1) * edges).map(|_| rng.gen::<f64>()).collect();
        RandomizedStrategy { budget: b, edges, probabilities }
    }
}

impl Strategy for RandomizedStrategy {
    fn name(&self) -> &str {
        "randomized"
    }

    fn budget(&self) -> usize {
        self.budget
    }

    fn decide(&mut self, view: &StepView<'_>) -> f64 {
        let e = edge_index(view.edge.0, view.edge.1);
        let slot = ((view.time - 1) * (self.budget + 1) + view.bought.edge_count()) * self.edges + e;
        self.probabilities[slot]
    }
}

/// Empirical success rate of `make` over `trials` engine trials, judged by
/// the table's checker.
pub fn simulate_strategy_value(
    table: &OracleTable,
    make: &(dyn Fn(usize) -> Box<dyn Strategy> + Sync),
    trials: usize,
    seed: u64,
    jobs: usize,
) -> Result<f64, OracleError> {
    let success = table.success.clone();
    let checker = FnChecker::new("oracle_checker", move |g: &graph_core::Graph| success[graph_mask(g) as usize]);
    let config = BatchConfig { n: table.n, t: table.t, trials, keep_history: false, jobs };
    let outcomes = run_batch(&config, seed, make, &checker).map_err(|e| OracleError::Parameter(e.to_string()))?;
    if let Some(e) = outcomes.iter().find_map(|o| o.errored.clone()) {
        return Err(OracleError::Parameter(e));
    }
    Ok(outcomes.iter().filter(|o| o.success).count() as f64 / trials.max(1) as f64)
}

/// Empirical success rate of the table's optimal policy.
pub fn simulate_policy_value(table: &Arc<OracleTable>, trials: usize, seed: u64, jobs: usize) -> Result<f64, OracleError> {
    let shared = Arc::clone(table);
    let make = move |_: usize| Box::new(OraclePolicy::new(Arc::clone(&shared))) as Box<dyn Strategy>;
    simulate_strategy_value(table, &make, trials, seed, jobs)
}
