use std::sync::Arc;

use graph_core::{Edge, Graph};
use process_engine::{
    child_seed, run_trial, FinalView, ProcessError, StepView, Strategy, StrategyReport, TrialOutcome, Witness,
};
use rayon::prelude::*;
use structure_checkers::HamPowerChecker;

use crate::stages::{Setup, StageMachine, Trace};
use crate::verify::{verify_trace, StageVerdict};

/// The four-stage strategy. Stage `i` covers steps `(i-1) t_i + 1 ..= i t_i`
/// with `t_i = ⌊t/4⌋`; later steps are never bought.
pub struct HamPowerStrategy {
    machine: StageMachine,
    stage_steps: usize,
}

impl HamPowerStrategy {
    pub fn new(setup: Arc<Setup>) -> Self {
        let stage_steps = setup.params.stage_steps;
        HamPowerStrategy { machine: StageMachine::new(setup), stage_steps }
    }

    pub fn trace(&self) -> &Trace {
        self.machine.trace()
    }

    pub fn machine(&self) -> &StageMachine {
        &self.machine
    }

    /// Stage of step `time`, or 5 past the last stage.
    fn stage_at(&self, time: usize) -> usize {
        if self.stage_steps == 0 {
            5
        } else {
            ((time - 1) / self.stage_steps + 1).min(5)
        }
    }

    fn advance_to(&mut self, stage: usize, bought: &Graph, presented: &[Edge]) {
        let prior_len = (3 * self.stage_steps).min(presented.len());
        let n = bought.n();
        let prior = || Graph::from_edges(n, presented[..prior_len].iter().copied()).expect("presented edges are valid");
        while self.machine.stage() < stage {
            if let Err(e) = self.machine.end_stage(bought, &prior) {
                panic!("ham-power strategy invariant violated: {e}");
            }
        }
    }
}

impl Strategy for HamPowerStrategy {
    fn name(&self) -> &str {
        "ham_power"
    }

    fn budget(&self) -> usize {
        self.machine.setup().params.budget
    }

    fn decide(&mut self, view: &StepView<'_>) -> f64 {
        let stage = self.stage_at(view.time);
        self.advance_to(stage, view.bought, &view.history.presented);
        if stage <= 4 && self.machine.wants(view.edge.0, view.edge.1) {
            1.0
        } else {
            0.0
        }
    }

    fn finish(&mut self, view: &FinalView<'_>) -> StrategyReport {
        self.advance_to(5, view.bought, &view.history.presented);
        StrategyReport {
            stage_log: self.machine.log().to_vec(),
            witness: self.machine.trace().order.clone().map(Witness::CyclicOrder),
        }
    }
}

/// A trial of the four-stage strategy with its independent verification.
#[derive(Debug)]
pub struct HamPowerTrial {
    pub outcome: TrialOutcome,
    pub trace: Trace,
    pub verdicts: Vec<StageVerdict>,
}

impl HamPowerTrial {
    /// Every stage that reported success passed its verifier.
    pub fn sound(&self) -> bool {
        self.verdicts.iter().all(|v| v.verified.is_ok())
    }
}

/// Runs `trials` trials with seeds `child_seed(master_seed, i)`, checks
/// success with the cycle-power checker and verifies every trace. Results
/// are ordered by trial index and do not depend on `jobs`.
pub fn run_ham_power_batch(
    setup: &Arc<Setup>,
    trials: usize,
    master_seed: u64,
    jobs: usize,
) -> Result<Vec<HamPowerTrial>, ProcessError> {
    let (n, t) = (setup.params.config.n, setup.params.config.t);
    let checker = HamPowerChecker { k: setup.k() };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .stack_size(64 << 20)
        .build()
        .map_err(|e| ProcessError::Parameter(format!("cannot start worker pool: {e}")))?;
    pool.install(|| {
        (0..trials)
            .into_par_iter()
            .map(|index| {
                let mut strategy = HamPowerStrategy::new(Arc::clone(setup));
                let mut outcome = run_trial(n, t, &mut strategy, &checker, child_seed(master_seed, index as u64), true)?;
                outcome.index = index;
                let trace = strategy.trace().clone();
                let verdicts = verify_trace(setup, &trace, &outcome.final_bought, &outcome.history.presented);
                Ok(HamPowerTrial { outcome, trace, verdicts })
            })
            .collect()
    })
}
