use std::sync::Arc;

use factor_strategies::{
    make_partition_factor, partition_checker, BuyAll, BuyNothing, FixedSubgraph, Forest, MinDegreeGreedy,
    PartitionMode,
};
use graph_core::{complete_edge_count, Graph};
use ham_power::{derive_params, run_ham_power_batch, HamPowerConfig, Setup};
use pattern_tools::{parse_pattern, PatternStats};
use process_engine::{run_batch, BatchConfig, PropertyChecker, Strategy, TrialRecord};
use serde::Serialize;
use structure_checkers::{
    ConnectivityChecker, FactorChecker, HamPowerChecker, MinDegreeChecker, PartialFactorChecker,
};

use crate::config::Config;
use crate::CliError;

type StrategyFactory = Box<dyn Fn(usize) -> Box<dyn Strategy> + Sync>;

enum Runner {
    Engine { make: StrategyFactory, checker: Box<dyn PropertyChecker> },
    HamPower(Arc<Setup>),
}

/// A validated experiment ready to run.
pub struct Experiment {
    pub strategy: String,
    pub n: usize,
    pub t: usize,
    pub budget: usize,
    pub trials: usize,
    /// Derived strategy parameters, for the record.
    pub derived: serde_json::Value,
    runner: Runner,
}

/// One line of `trials.jsonl`.
#[derive(Clone, Debug, Serialize)]
pub struct TrialLine {
    #[serde(flatten)]
    pub record: TrialRecord,
    /// Whether every stage reporting success passed its verifier.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sound: Option<bool>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub rejected_stages: Vec<String>,
}

/// Aggregate of one run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub strategy: String,
    pub n: usize,
    pub t: usize,
    pub b: usize,
    pub trials: usize,
    pub successes: usize,
    pub mean_budget_used: f64,
    pub max_budget_used: usize,
    pub errored: usize,
    pub unsound: usize,
}

impl Summary {
    pub fn success_rate(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.successes as f64 / self.trials as f64
        }
    }
}

pub struct ExperimentResult {
    pub lines: Vec<TrialLine>,
    pub summary: Summary,
}

fn field_error(field: &str, message: impl Into<String>) -> CliError {
    CliError::Config { field: field.to_string(), message: message.into() }
}

fn parse_edges(n: usize, text: &str) -> Result<Graph, CliError> {
    let mut g = Graph::empty(n);
    for token in text.split_whitespace() {
        let pair = token.split_once('-').and_then(|(u, v)| Some((u.parse::<usize>().ok()?, v.parse::<usize>().ok()?)));
        match pair {
            Some((u, v)) if u < n && v < n && u != v => {
                g.add_edge(u, v);
            }
            _ => return Err(field_error("[strategy].edges", format!("invalid edge `{token}`"))),
        }
    }
    Ok(g)
}

fn pattern_stats(config: &Config, section: &str) -> Result<PatternStats, CliError> {
    let field = format!("[{section}].pattern");
    let spec: String = config.require(section, "pattern")?;
    let pattern = parse_pattern(&spec).map_err(|e| field_error(&field, e.to_string()))?;
    PatternStats::compute(&pattern).map_err(|e| field_error(&field, e.to_string()))
}

fn explicit_checker(config: &Config, n: usize) -> Result<Option<Box<dyn PropertyChecker>>, CliError> {
    let Some(name) = config.get::<String>("checker", "name")? else {
        return Ok(None);
    };
    let checker: Box<dyn PropertyChecker> = match name.as_str() {
        "min_degree" => Box::new(MinDegreeChecker { k: config.get("checker", "k")?.unwrap_or(1) }),
        "connected" => Box::new(ConnectivityChecker),
        "factor" => Box::new(FactorChecker::new(pattern_stats(config, "checker")?.pattern)),
        "partial_factor" => {
            let pattern = pattern_stats(config, "checker")?.pattern;
            let target = match config.get::<usize>("checker", "target")? {
                Some(target) => target,
                None => {
                    let alpha: f64 = config.require("checker", "alpha")?;
                    (alpha * n as f64 / pattern.n() as f64).ceil() as usize
                }
            };
            Box::new(PartialFactorChecker::new(pattern, target))
        }
        "ham_power" => Box::new(HamPowerChecker { k: config.require("checker", "k")? }),
        other => {
            return Err(field_error(
                "[checker].name",
                format!("unknown checker `{other}`; expected min_degree, connected, factor, partial_factor or ham_power"),
            ))
        }
    };
    Ok(Some(checker))
}

fn require_checker(checker: Option<Box<dyn PropertyChecker>>) -> Result<Box<dyn PropertyChecker>, CliError> {
    checker.ok_or_else(|| field_error("[checker].name", "this strategy needs an explicit checker"))
}

fn ham_power_config(config: &Config, n: usize, t: usize) -> Result<HamPowerConfig, CliError> {
    let section = "strategy";
    let mut hp = HamPowerConfig::new(
        n,
        t,
        config.require(section, "k")?,
        config.require(section, "j")?,
        config.require(section, "ell")?,
        config.require(section, "q")?,
        config.require(section, "r")?,
    );
    if let Some(v) = config.get(section, "epsilon")? {
        hp.epsilon = v;
    }
    if let Some(v) = config.get(section, "delta_prime")? {
        hp.delta_prime = v;
    }
    if let Some(v) = config.get(section, "stage1_constant")? {
        hp.stage1_constant = v;
    }
    if let Some(v) = config.get(section, "stage3_constant")? {
        hp.stage3_constant = v;
    }
    hp.threshold_multiple = config.get(section, "threshold_multiple")?;
    hp.xi_override = config.get(section, "xi")?;
    if let Some(v) = config.get(section, "linkage_budget")? {
        hp.linkage_budget = v;
    }
    if let Some(v) = config.get(section, "factor_budget")? {
        hp.factor_budget = v;
    }
    Ok(hp)
}

impl Experiment {
    /// Validates a configuration. Every error names the offending field.
    pub fn from_config_text(text: &str) -> Result<Self, CliError> {
        let config = Config::parse(text)?;
        let n: usize = config.require("process", "n")?;
        if n < 2 {
            return Err(field_error("[process].n", "need n >= 2"));
        }
        let m = complete_edge_count(n);
        let t = match (config.get::<usize>("process", "t")?, config.get::<f64>("process", "t_fraction")?) {
            (Some(t), None) => t,
            (None, Some(f)) if (0.0..=1.0).contains(&f) => (f * m as f64).floor() as usize,
            (None, Some(f)) => return Err(field_error("[process].t_fraction", format!("{f} is outside [0, 1]"))),
            _ => return Err(field_error("[process].t", "give exactly one of t and t_fraction")),
        };
        if t > m {
            return Err(field_error("[process].t", format!("t = {t} exceeds M = {m}")));
        }
        let trials: usize = config.require("process", "trials")?;
        let name: String = config.require("strategy", "name")?;
        let checker = if name == "ham_power" { None } else { explicit_checker(&config, n)? };
        let plain_budget = |config: &Config| -> Result<usize, CliError> { Ok(config.get("strategy", "b")?.unwrap_or(t)) };

        let (budget, derived, runner) = match name.as_str() {
            "buy_all" | "buy_nothing" | "forest" => {
                let b = plain_budget(&config)?;
                let make: StrategyFactory = match name.as_str() {
                    "buy_all" => Box::new(move |_| Box::new(BuyAll::new(b))),
                    "buy_nothing" => Box::new(move |_| Box::new(BuyNothing::new(b))),
                    _ => Box::new(move |_| Box::new(Forest::new(n, b))),
                };
                (b, serde_json::Value::Null, Runner::Engine { make, checker: require_checker(checker)? })
            }
            "min_degree_greedy" => {
                let b = plain_budget(&config)?;
                let kdeg: usize = config.require("strategy", "kdeg")?;
                if kdeg == 0 {
                    return Err(field_error("[strategy].kdeg", "need kdeg >= 1"));
                }
                let make: StrategyFactory = Box::new(move |_| Box::new(MinDegreeGreedy::new(kdeg, b)));
                (b, serde_json::Value::Null, Runner::Engine { make, checker: require_checker(checker)? })
            }
            "fixed_subgraph" => {
                let b = plain_budget(&config)?;
                let target = Arc::new(parse_edges(n, &config.require::<String>("strategy", "edges")?)?);
                let make: StrategyFactory = Box::new(move |_| Box::new(FixedSubgraph::new(Arc::clone(&target), b)));
                (b, serde_json::Value::Null, Runner::Engine { make, checker: require_checker(checker)? })
            }
            "partition_factor" => {
                let stats = pattern_stats(&config, "strategy")?;
                let mode: PartitionMode = config
                    .require::<String>("strategy", "mode")?
                    .parse()
                    .map_err(|e: factor_strategies::StrategyError| field_error("[strategy].mode", e.to_string()))?;
                let constant: f64 = config.require("strategy", "constant")?;
                let alpha: f64 = config.get("strategy", "alpha")?.unwrap_or(1.0);
                let (strategy, params) = make_partition_factor(&stats, n, t, constant, mode)
                    .map_err(|e| field_error("[strategy]", e.to_string()))?;
                let checker = match checker {
                    Some(c) => c,
                    None => partition_checker(&params, alpha),
                };
                let derived = serde_json::json!({
                    "mode": params.mode.as_str(),
                    "p": params.p,
                    "constant": params.constant,
                    "part_count": params.part_count,
                    "part_sizes": params.part_sizes,
                    "budget_formula": params.budget_formula,
                    "budget": params.budget,
                    "alpha": alpha,
                });
                let make: StrategyFactory = Box::new(move |_| Box::new(strategy.clone()));
                (params.budget, derived, Runner::Engine { make, checker })
            }
            "ham_power" => {
                let hp = ham_power_config(&config, n, t)?;
                let params = derive_params(&hp).map_err(|e| field_error("[strategy]", e.to_string()))?;
                let setup = Setup::new(params).map_err(|e| field_error("[strategy]", e.to_string()))?;
                if config.has("checker", "name") {
                    let checker: String = config.require("checker", "name")?;
                    let k: usize = config.get("checker", "k")?.unwrap_or(setup.k());
                    if checker != "ham_power" || k != setup.k() {
                        return Err(field_error("[checker].name", "ham_power runs use the ham_power checker with the strategy's k"));
                    }
                }
                let derived = serde_json::to_value(&setup.params).expect("parameters serialize");
                (setup.params.budget, derived, Runner::HamPower(setup))
            }
            other => {
                return Err(field_error(
                    "[strategy].name",
                    format!(
                        "unknown strategy `{other}`; expected buy_all, buy_nothing, fixed_subgraph, min_degree_greedy, forest, partition_factor or ham_power"
                    ),
                ))
            }
        };
        config.finish()?;
        Ok(Experiment { strategy: name, n, t, budget, trials, derived, runner })
    }

    /// Runs every trial; trial `i` uses `child_seed(seed, i)`.
    pub fn run(&self, seed: u64, jobs: usize) -> Result<ExperimentResult, CliError> {
        let run_error = |e: process_engine::ProcessError| CliError::Run(e.to_string());
        let lines: Vec<TrialLine> = match &self.runner {
            Runner::Engine { make, checker } => {
                let config = BatchConfig { n: self.n, t: self.t, trials: self.trials, keep_history: false, jobs };
                run_batch(&config, seed, make.as_ref(), checker.as_ref())
                    .map_err(run_error)?
                    .iter()
                    .map(|o| TrialLine { record: o.record(), sound: None, rejected_stages: Vec::new() })
                    .collect()
            }
            Runner::HamPower(setup) => run_ham_power_batch(setup, self.trials, seed, jobs)
                .map_err(run_error)?
                .iter()
                .map(|trial| TrialLine {
                    record: trial.outcome.record(),
                    sound: Some(trial.sound()),
                    rejected_stages: trial
                        .verdicts
                        .iter()
                        .filter_map(|v| v.verified.as_ref().err().map(|e| format!("{}: {e}", v.stage)))
                        .collect(),
                })
                .collect(),
        };
        let used: Vec<usize> = lines.iter().map(|l| l.record.budget_used).collect();
        let summary = Summary {
            strategy: self.strategy.clone(),
            n: self.n,
            t: self.t,
            b: self.budget,
            trials: lines.len(),
            successes: lines.iter().filter(|l| l.record.success).count(),
            mean_budget_used: if used.is_empty() { 0.0 } else { used.iter().sum::<usize>() as f64 / used.len() as f64 },
            max_budget_used: used.iter().copied().max().unwrap_or(0),
            errored: lines.iter().filter(|l| l.record.errored.is_some()).count(),
            unsound: lines.iter().filter(|l| l.sound == Some(false)).count(),
        };
        Ok(ExperimentResult { lines, summary })
    }
}
