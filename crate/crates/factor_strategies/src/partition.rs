use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use graph_core::complete_edge_count;
use pattern_tools::{f_equipartition, PatternStats};
use process_engine::{PropertyChecker, StepView, Strategy};
use serde::{Deserialize, Serialize};
use structure_checkers::{FactorChecker, PartialFactorChecker};

use crate::StrategyError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PartitionMode {
    FullStrictlyBalanced,
    Partial,
    FullNonbalanced,
}

impl PartitionMode {
    pub fn as_str(self) -> &'static str {
        match self {
            PartitionMode::FullStrictlyBalanced => "full_strictly_balanced",
            PartitionMode::Partial => "partial",
            PartitionMode::FullNonbalanced => "full_nonbalanced",
        }
    }

    pub fn is_full(self) -> bool {
        self != PartitionMode::Partial
    }
}

impl fmt::Display for PartitionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PartitionMode {
    type Err = StrategyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "full_strictly_balanced" | "full" => Ok(PartitionMode::FullStrictlyBalanced),
            "partial" => Ok(PartitionMode::Partial),
            "full_nonbalanced" => Ok(PartitionMode::FullNonbalanced),
            other => Err(StrategyError::Parameter(format!("unknown partition mode \"{other}\""))),
        }
    }
}

/// Derived quantities of a partition strategy.
#[derive(Clone, Debug, Serialize)]
pub struct PartitionStrategyParams {
    pub pattern: PatternStats,
    pub mode: PartitionMode,
    pub n: usize,
    pub t: usize,
    /// `t / M`.
    pub p: f64,
    /// The tuning constant `K`.
    pub constant: f64,
    pub part_count: usize,
    pub part_sizes: Vec<usize>,
    /// Real value of the budget formula; `budget` is its floor.
    pub budget_formula: f64,
    pub budget: usize,
}

/// Part count and budget formula of `mode` as reals.
pub fn partition_formulas(stats: &PatternStats, n: usize, t: usize, constant: f64, mode: PartitionMode) -> (f64, f64) {
    let nf = n as f64;
    let tf = t as f64;
    let p = tf / complete_edge_count(n) as f64;
    let ln_n = nf.ln();
    match mode {
        PartitionMode::FullStrictlyBalanced => {
            let d = ratio(stats.one_density);
            let log_factor = ln_n.powf(1.0 / (stats.vertices() as f64 - 1.0));
            let parts = p.powf(d) * nf / (constant * log_factor);
            let budget = 9.0 * constant * tf.powf(1.0 - d) * nf.powf(2.0 * d - 1.0) * log_factor;
            (parts, budget)
        }
        PartitionMode::Partial | PartitionMode::FullNonbalanced => {
            let d = ratio(stats.max_one_density);
            let parts = p.powf(d) * nf / constant;
            let budget = 9.0 * constant * tf.powf(1.0 - d) * nf.powf(2.0 * d - 1.0);
            (parts, budget)
        }
    }
}

fn ratio(d: pattern_tools::Density) -> f64 {
    *d.numer() as f64 / *d.denom() as f64
}

/// Buys an edge iff both endpoints lie in the same part of a fixed
/// equipartition. Vertices outside every part are never touched.
#[derive(Clone, Debug)]
pub struct PartitionFactor {
    part_of: Arc<Vec<usize>>,
    budget: usize,
}

const UNASSIGNED: usize = usize::MAX;

impl PartitionFactor {
    pub fn part_of(&self, v: usize) -> Option<usize> {
        self.part_of.get(v).copied().filter(|&p| p != UNASSIGNED)
    }
}

impl Strategy for PartitionFactor {
    fn name(&self) -> &str {
        "partition_factor"
    }
    fn budget(&self) -> usize {
        self.budget
    }
    fn decide(&mut self, view: &StepView<'_>) -> f64 {
        let (a, b) = (self.part_of[view.edge.0], self.part_of[view.edge.1]);
        if a == b && a != UNASSIGNED {
            1.0
        } else {
            0.0
        }
    }
}

/// Builds the partition strategy on `[n]` with `p = t / M`.
///
/// Full modes require `v(F) | n`. In partial mode the last `n mod v(F)`
/// vertices are left out of the partition.
pub fn make_partition_factor(
    stats: &PatternStats,
    n: usize,
    t: usize,
    constant: f64,
    mode: PartitionMode,
) -> Result<(PartitionFactor, PartitionStrategyParams), StrategyError> {
    let f = stats.vertices();
    if n < 2 || t > complete_edge_count(n) {
        return Err(StrategyError::Parameter(format!("need n >= 2 and t <= M, got n = {n}, t = {t}")));
    }
    if !(constant.is_finite() && constant > 0.0) {
        return Err(StrategyError::Parameter(format!("K must be positive, got {constant}")));
    }
    match mode {
        PartitionMode::FullStrictlyBalanced if !stats.strictly_one_balanced => {
            return Err(StrategyError::Parameter("full_strictly_balanced mode needs a strictly 1-balanced pattern".into()))
        }
        PartitionMode::FullNonbalanced if stats.vertex_balanced => {
            return Err(StrategyError::Parameter("full_nonbalanced mode needs a pattern that is not vertex balanced".into()))
        }
        _ => {}
    }
    if mode.is_full() && n % f != 0 {
        return Err(StrategyError::Parameter(format!("v(F) = {f} does not divide n = {n}")));
    }
    let (parts_real, budget_formula) = partition_formulas(stats, n, t, constant, mode);
    if !(parts_real >= 1.0) {
        return Err(StrategyError::Parameter(format!(
            "derived part count {parts_real:.4} < 1: t = {t} is too small for n = {n} and K = {constant}"
        )));
    }
    let part_count = parts_real.floor() as usize;
    let used = n - n % f;
    let vertices: Vec<usize> = (0..used).collect();
    let parts = f_equipartition(&vertices, part_count, f).map_err(|e| {
        StrategyError::Parameter(format!("cannot split {used} vertices into {part_count} parts: {e}"))
    })?;
    let mut part_of = vec![UNASSIGNED; n];
    for (i, part) in parts.iter().enumerate() {
        for &v in part {
            part_of[v] = i;
        }
    }
    let budget = if budget_formula >= usize::MAX as f64 { usize::MAX } else { budget_formula.floor() as usize };
    let params = PartitionStrategyParams {
        pattern: stats.clone(),
        mode,
        n,
        t,
        p: t as f64 / complete_edge_count(n) as f64,
        constant,
        part_count,
        part_sizes: parts.iter().map(Vec::len).collect(),
        budget_formula,
        budget,
    };
    Ok((PartitionFactor { part_of: Arc::new(part_of), budget }, params))
}

/// Success property of a partition strategy: a spanning factor in full
/// modes, at least `ceil(alpha n / v(F))` disjoint copies in partial mode.
pub fn partition_checker(params: &PartitionStrategyParams, alpha: f64) -> Box<dyn PropertyChecker> {
    let pattern = params.pattern.pattern.clone();
    if params.mode.is_full() {
        Box::new(FactorChecker::new(pattern))
    } else {
        let target = (alpha * params.n as f64 / pattern.n() as f64).ceil().max(0.0) as usize;
        Box::new(PartialFactorChecker::new(pattern, target))
    }
}
