use graph_core::{Edge, Graph};
use serde::{Deserialize, Serialize};

/// Presented edges in order together with the purchase bit of each.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecisionHistory {
    pub presented: Vec<Edge>,
    pub purchases: Vec<bool>,
}

impl DecisionHistory {
    pub fn len(&self) -> usize {
        self.presented.len()
    }

    pub fn is_empty(&self) -> bool {
        self.presented.is_empty()
    }

    pub fn purchase_count(&self) -> usize {
        self.purchases.iter().filter(|&&b| b).count()
    }
}

/// Everything a strategy may look at when the edge at step `time` arrives.
pub struct StepView<'a> {
    pub n: usize,
    pub total_steps: usize,
    /// 1-based index of the incoming edge.
    pub time: usize,
    pub edge: Edge,
    /// Steps `1..time`.
    pub history: &'a DecisionHistory,
    /// `B_{time-1}`.
    pub bought: &'a Graph,
    /// `G_{time-1}`.
    pub presented: &'a Graph,
    pub budget: usize,
}

impl StepView<'_> {
    pub fn purchases_so_far(&self) -> usize {
        self.bought.edge_count()
    }
}

/// State at the end of a trial.
pub struct FinalView<'a> {
    pub n: usize,
    pub total_steps: usize,
    pub history: &'a DecisionHistory,
    pub bought: &'a Graph,
    pub presented: &'a Graph,
    pub budget: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageRecord {
    pub stage: String,
    pub success: bool,
    pub detail: String,
}

impl StageRecord {
    pub fn new(stage: impl Into<String>, success: bool, detail: impl Into<String>) -> Self {
        StageRecord { stage: stage.into(), success, detail: detail.into() }
    }
}

/// Structure a strategy claims to have built; the checker verifies it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    CyclicOrder(Vec<usize>),
    Copies(Vec<Vec<usize>>),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StrategyReport {
    pub stage_log: Vec<StageRecord>,
    pub witness: Option<Witness>,
}

/// A `(t, b)`-strategy with per-trial state.
///
/// `decide` is queried only while fewer than `budget()` edges are bought and
/// must return a probability in `[0, 1]`; deterministic strategies return
/// only `0.0` or `1.0`.
pub trait Strategy: Send {
    fn name(&self) -> &str;
    fn budget(&self) -> usize;
    fn decide(&mut self, view: &StepView<'_>) -> f64;
    fn finish(&mut self, _view: &FinalView<'_>) -> StrategyReport {
        StrategyReport::default()
    }
}

/// Success predicate evaluated on the final bought graph.
pub trait PropertyChecker: Sync {
    fn name(&self) -> String;
    fn check(&self, bought: &Graph, report: &StrategyReport) -> Result<bool, String>;
}

/// Adapts a plain predicate on graphs.
pub struct FnChecker<F> {
    label: String,
    predicate: F,
}

impl<F: Fn(&Graph) -> bool + Sync> FnChecker<F> {
    pub fn new(label: impl Into<String>, predicate: F) -> Self {
        FnChecker { label: label.into(), predicate }
    }
}

impl<F: Fn(&Graph) -> bool + Sync> PropertyChecker for FnChecker<F> {
    fn name(&self) -> String {
        self.label.clone()
    }

    fn check(&self, bought: &Graph, _report: &StrategyReport) -> Result<bool, String> {
        Ok((self.predicate)(bought))
    }
}
