//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! A failure is tolerated when only a calibrated empirical target is
//! missed while every exact invariant of the same criterion holds; it
//! still prints FAIL. Any other failure makes the target exit non-zero.

use std::fs;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use bounds_analytics::{budget_exponent_exact, copy_count_statistic, BoundFamily, BoundKind, BoundSpec};
use couplings::{check_fkg_exact, default_probabilities, fkg_catalogue_pairs, increasing_catalogue, validate_multistage};
use experiment_cli::{Experiment, ExperimentResult};
use factor_strategies::{make_partition_factor, BuyAll, BuyNothing, FixedSubgraph, Forest, MinDegreeGreedy, PartitionMode};
use graph_core::{complete_edge_count, sample_gnp, Graph};
use ham_power::{derive_params, run_ham_power_batch, HamPowerConfig, HamPowerStrategy, Setup};
use num_rational::Rational64;
use pattern_tools::{complete_pattern, is_strictly_one_balanced, max_one_density, path_power, PatternStats};
use process_engine::{
    replay_purchases, run_batch, run_trial, verify_outcome_invariants, BatchConfig, FnChecker, Strategy,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use small_oracle::{decision_tree_value, simulate_strategy_value, solve, OraclePolicy, RandomizedStrategy};
use structure_checkers::{has_f_factor, MinDegreeChecker};

struct Verdict {
    pass: bool,
    /// Set when the failure is confined to a calibrated empirical target.
    tolerated: bool,
    detail: String,
}

impl Verdict {
    fn exact(pass: bool, detail: String) -> Self {
        Verdict { pass, tolerated: false, detail }
    }
}

fn golden(name: &str) -> String {
    let path = format!("{}/../../configs/{name}", env!("CARGO_MANIFEST_DIR"));
    fs::read_to_string(&path).unwrap_or_else(|e| panic!("cannot read {path}: {e}"))
}

fn run_golden(name: &str, seed: u64) -> (Experiment, ExperimentResult) {
    let experiment = Experiment::from_config_text(&golden(name)).unwrap_or_else(|e| panic!("{name}: {e}"));
    let result = experiment.run(seed, 0).unwrap_or_else(|e| panic!("{name}: {e}"));
    (experiment, result)
}

fn r(a: i64, b: i64) -> Rational64 {
    Rational64::new(a, b)
}

fn golden_ham_config() -> HamPowerConfig {
    let n = 1504;
    let mut config = HamPowerConfig::new(n, complete_edge_count(n) * 3 / 5, 2, 3, 8, 1009, 2);
    config.xi_override = Some(1);
    config.threshold_multiple = Some(1e9);
    config
}

fn process_invariants() -> Verdict {
    let (n, t, b) = (12, 40, 15);
    let stats = PatternStats::compute(&complete_pattern(2)).unwrap();
    let (partition, _) = make_partition_factor(&stats, n, t, 1.0, PartitionMode::FullStrictlyBalanced).unwrap();
    let fixed = Arc::new(Graph::from_edges(n, (0..n - 1).map(|v| (v, v + 1))).unwrap());
    let oracle = Arc::new(solve(4, 5, 3, &|g: &Graph| g.edge_count() >= 3 && g.degree(0) >= 2).unwrap());
    type Maker = Box<dyn Fn(usize) -> Box<dyn Strategy> + Sync>;
    let makers: Vec<(usize, usize, Maker)> = vec![
        (n, t, Box::new(move |_| Box::new(BuyAll::new(b)))),
        (n, t, Box::new(move |_| Box::new(BuyNothing::new(b)))),
        (n, t, Box::new(move |_| Box::new(FixedSubgraph::new(Arc::clone(&fixed), b)))),
        (n, t, Box::new(move |_| Box::new(MinDegreeGreedy::new(2, b)))),
        (n, t, Box::new(move |_| Box::new(Forest::new(n, b)))),
        (n, t, Box::new(move |_| Box::new(partition.clone()))),
        (4, 5, Box::new(move |i| Box::new(RandomizedStrategy::from_seed(4, 5, 3, i as u64)))),
        (4, 5, Box::new(move |_| Box::new(OraclePolicy::new(Arc::clone(&oracle))))),
    ];
    let checker = MinDegreeChecker { k: 1 };
    let mut trials = 0;
    let mut problems = Vec::new();
    for (kind, (n, t, make)) in makers.iter().enumerate() {
        let config = BatchConfig { n: *n, t: *t, trials: 125, keep_history: true, jobs: 0 };
        let outcomes = run_batch(&config, 100 + kind as u64, make.as_ref(), &checker).unwrap();
        let again = run_batch(&BatchConfig { jobs: 1, ..config.clone() }, 100 + kind as u64, make.as_ref(), &checker).unwrap();
        for (o, a) in outcomes.iter().zip(&again) {
            trials += 1;
            if let Err(e) = verify_outcome_invariants(o) {
                problems.push(format!("{} trial {}: {e}", o.strategy, o.index));
            }
            if replay_purchases(o, make(o.index).as_mut()).ok().as_ref() != Some(&o.history.purchases) {
                problems.push(format!("{} trial {}: replay differs", o.strategy, o.index));
            }
            if o.record() != a.record() || o.history != a.history {
                problems.push(format!("{} trial {}: rerun differs", o.strategy, o.index));
            }
        }
    }
    let setup = Setup::new(derive_params(&golden_ham_config()).unwrap()).unwrap();
    for trial in run_ham_power_batch(&setup, 2, 5, 0).unwrap() {
        trials += 1;
        let o = &trial.outcome;
        if let Err(e) = verify_outcome_invariants(o) {
            problems.push(format!("ham_power trial {}: {e}", o.index));
        }
        let mut fresh = HamPowerStrategy::new(Arc::clone(&setup));
        if replay_purchases(o, &mut fresh).ok().as_ref() != Some(&o.history.purchases) {
            problems.push(format!("ham_power trial {}: replay differs", o.index));
        }
    }
    Verdict::exact(problems.is_empty(), format!("{trials} trials over 9 strategies, {} violations {:?}", problems.len(), problems.first()))
}

fn analytic_curves() -> Verdict {
    let mut bad = Vec::new();
    let mut check = |family: BoundFamily, lo: Rational64, at_lo: Rational64| {
        let spec = BoundSpec::new(family, BoundKind::LowerBound).unwrap();
        for (x, want) in [(lo, at_lo), (r(2, 1), r(1, 1))] {
            let got = budget_exponent_exact(&spec, x).unwrap();
            if got != want {
                bad.push(format!("{} {} at {x}: {got} != {want}", spec.family.name(), spec.family.param(), ));
            }
        }
    };
    for rr in 3..=7i64 {
        check(BoundFamily::CliqueFactor(rr as usize), r(2 * rr - 2, rr), r(2 * rr - 2, rr));
    }
    for k in 2..=5i64 {
        check(BoundFamily::HamPower(k as usize), r(2 * k - 1, k), r(2 * k - 1, k));
    }
    for rr in 3..=7usize {
        let clique = BoundSpec::new(BoundFamily::CliqueFactor(rr), BoundKind::LowerBound).unwrap();
        let general = BoundSpec::new(
            BoundFamily::FFactor { d_star: r(rr as i64, 2), vertices: rr, strictly_balanced: true },
            BoundKind::LowerBound,
        )
        .unwrap();
        let lo = r(2 * rr as i64 - 2, rr as i64);
        for i in 0..50 {
            let x = lo + (r(2, 1) - lo) * r(i, 49);
            if budget_exponent_exact(&clique, x).unwrap() != budget_exponent_exact(&general, x).unwrap() {
                bad.push(format!("r={rr} x={x}: clique and general formulas differ"));
            }
        }
    }
    Verdict::exact(bad.is_empty(), format!("9 endpoint pairs, 250 grid points, mismatches {bad:?}"))
}

fn subgraph_density(f: &Graph) -> Rational64 {
    let v = f.n();
    (1u32..1 << v)
        .filter(|s| s.count_ones() >= 2)
        .map(|s| {
            let vs: Vec<usize> = (0..v).filter(|i| s >> i & 1 == 1).collect();
            r(f.induced(&vs).edge_count() as i64, vs.len() as i64 - 1)
        })
        .max()
        .unwrap()
}

fn strictly_balanced_by_enumeration(f: &Graph) -> bool {
    let v = f.n();
    let whole = r(f.edge_count() as i64, v as i64 - 1);
    (1u32..(1 << v) - 1).filter(|s| s.count_ones() >= 2).all(|s| {
        let vs: Vec<usize> = (0..v).filter(|i| s >> i & 1 == 1).collect();
        r(f.induced(&vs).edge_count() as i64, vs.len() as i64 - 1) < whole
    })
}

fn density_oracle() -> Verdict {
    let mut bad = Vec::new();
    for rr in 2..=6usize {
        let k = complete_pattern(rr);
        let d = max_one_density(&k).unwrap();
        if d != r(rr as i64, 2) || subgraph_density(&k) != d {
            bad.push(format!("K{rr}: {d}"));
        }
        if !is_strictly_one_balanced(&k).unwrap() || !strictly_balanced_by_enumeration(&k) {
            bad.push(format!("K{rr} not strictly balanced"));
        }
    }
    for (q, k) in [(5, 2), (6, 2), (7, 3)] {
        let p = path_power(q, k);
        let d = max_one_density(&p).unwrap();
        if d >= r(k as i64, 1) || subgraph_density(&p) != d {
            bad.push(format!("P{q}^{k}: {d} vs enumeration {}", subgraph_density(&p)));
        }
    }
    Verdict::exact(bad.is_empty(), format!("8 patterns against subset enumeration, mismatches {bad:?}"))
}

fn max_matching(g: &Graph, mask: u32) -> usize {
    if mask == 0 {
        return 0;
    }
    let v = mask.trailing_zeros() as usize;
    let rest = mask & !(1 << v);
    let skip = max_matching(g, rest);
    g.neighbors(v)
        .filter(|&u| rest >> u & 1 == 1)
        .map(|u| 1 + max_matching(g, rest & !(1 << u)))
        .fold(skip, usize::max)
}

fn checker_equivalence() -> Verdict {
    let k2 = complete_pattern(2);
    let mut graphs = 0;
    let mut bad = Vec::new();
    let mut compare = |g: &Graph| {
        graphs += 1;
        let perfect = g.n() % 2 == 0 && 2 * max_matching(g, (1u32 << g.n()) - 1) == g.n();
        // Vertex counts not divisible by v(F) are rejected as parameter errors.
        let factor = match has_f_factor(g, &k2) {
            Ok(witness) => witness.is_some(),
            Err(_) if g.n() % 2 == 1 => false,
            Err(e) => panic!("{e}"),
        };
        if factor != perfect {
            bad.push(g.to_edge_list());
        }
    };
    for n in 1..=6 {
        let m = complete_edge_count(n);
        for mask in 0u32..1 << m {
            let edges = (0..m).filter(|e| mask >> e & 1 == 1).map(graph_core::edge_from_index);
            compare(&Graph::from_edges(n, edges).unwrap());
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for n in [7, 8] {
        for i in 0..500 {
            compare(&sample_gnp(n, 0.15 + 0.7 * (i as f64 / 500.0), &mut rng).unwrap());
        }
    }
    Verdict::exact(bad.is_empty(), format!("{graphs} graphs, {} disagreements {:?}", bad.len(), bad.first()))
}

fn coupling_exactness() -> Verdict {
    let (p, p_bar) = default_probabilities(4, &[2, 2]);
    let report = validate_multistage(4, &[2, 2], &p, &p_bar, 100_000, 5, 0).unwrap();
    let pass = report.containment_checked > 0
        && report.containment_checked == report.containment_held
        && report.impossible == 0
        && report.p_value > 0.01;
    Verdict::exact(
        pass,
        format!(
            "containments {}/{} failure-free samples, chi-square {:.2} on {} dof, p = {:.4}",
            report.containment_held, report.containment_checked, report.statistic, report.dof, report.p_value
        ),
    )
}

fn fkg_exact() -> Verdict {
    let mut checks = 0;
    let mut bad = Vec::new();
    for (f, g) in fkg_catalogue_pairs() {
        for n in [3, 4] {
            for p in [r(1, 4), r(1, 2)] {
                checks += 1;
                if !check_fkg_exact(n, p, &f.eval, &g.eval).unwrap().holds {
                    bad.push(format!("{f:?}/{g:?} n={n} p={p}"));
                }
            }
        }
    }
    Verdict::exact(bad.is_empty(), format!("{checks} exact checks, violations {bad:?}"))
}

fn oracle_checks() -> Verdict {
    let mut bad = Vec::new();
    let m = complete_edge_count(4);
    for pred in increasing_catalogue() {
        let value = |t: usize, b: usize| solve(4, t, b.min(t), &pred.eval).unwrap().value();
        for t in 0..=m {
            for b in 0..=t {
                let v = value(t, b);
                if (t < m && value(t + 1, b) < v) || (b < t && value(t, b + 1) < v) {
                    bad.push(format!("{} not monotone at t={t} b={b}", pred.name));
                }
            }
        }
    }
    let triangle = increasing_catalogue().into_iter().find(|p| p.name == "has_triangle").unwrap();
    for (t, b) in [(3, 2), (4, 3)] {
        let induction = solve(4, t, b, &triangle.eval).unwrap().value();
        let tree = decision_tree_value(4, t, b, &triangle.eval).unwrap();
        if induction != tree {
            bad.push(format!("t={t} b={b}: induction {induction} vs decision tree {tree}"));
        }
    }
    let table = solve(4, 4, 3, &triangle.eval).unwrap();
    let v = *table.value().numer() as f64 / *table.value().denom() as f64;
    let trials = 100_000;
    let sigma = (v * (1.0 - v) / trials as f64).sqrt();
    let mut best: f64 = 0.0;
    for s in 0..20u64 {
        let make = move |_: usize| Box::new(RandomizedStrategy::from_seed(4, 4, 3, 1_000 + s)) as Box<dyn Strategy>;
        let rate = simulate_strategy_value(&table, &make, trials, s, 0).unwrap();
        best = best.max(rate);
        if rate > v + 3.0 * sigma {
            bad.push(format!("randomized strategy {s}: {rate} > {v} + 3 sigma"));
        }
    }
    Verdict::exact(
        bad.is_empty(),
        format!("oracle value {v:.4}, best of 20 randomized strategies {best:.4}, problems {bad:?}"),
    )
}

fn budgets_hold(experiment: &Experiment, result: &ExperimentResult) -> bool {
    result.lines.iter().all(|l| l.record.budget_used <= experiment.budget && l.record.errored.is_none())
}

fn perfect_matching() -> Verdict {
    let (experiment, result) = run_golden("perfect_matching.ini", 1);
    let budgets = budgets_hold(&experiment, &result);
    let rate = result.summary.success_rate();
    Verdict {
        pass: budgets && rate >= 0.8,
        tolerated: budgets,
        detail: format!(
            "success {}/{} (target 0.8), b = {}, max budget used {}",
            result.summary.successes, result.summary.trials, experiment.budget, result.summary.max_budget_used
        ),
    }
}

fn triangle_sweep() -> Verdict {
    let mut rates = Vec::new();
    let mut budgets = true;
    for k in [1, 2, 4, 8] {
        let (experiment, result) = run_golden(&format!("triangle_factor_k{k}.ini"), 1);
        budgets &= budgets_hold(&experiment, &result);
        rates.push(result.summary.success_rate());
    }
    let monotone = rates.windows(2).all(|w| w[0] <= w[1]);
    let reaches = rates.iter().any(|&x| x >= 0.8);
    Verdict {
        pass: budgets && monotone && reaches,
        tolerated: budgets,
        detail: format!("success rates at K = 1, 2, 4, 8: {rates:?}, budgets respected: {budgets}"),
    }
}

fn ham_power() -> Verdict {
    let (experiment, golden) = run_golden("ham_square.ini", 1);
    let dense = "[process]\nn = 985\nt_fraction = 1\ntrials = 3\n[strategy]\nname = ham_power\nk = 2\nj = 3\nell = 4\n\
                 q = 643\nr = 2\nxi = 1\nthreshold_multiple = 1000000000\nfactor_budget = 200000\n";
    let dense = Experiment::from_config_text(dense).unwrap().run(2, 0).unwrap();
    let lines = golden.lines.iter().chain(&dense.lines);
    let (mut checked, mut unsound) = (0, Vec::new());
    for line in lines {
        checked += 1;
        if line.sound != Some(true) {
            unsound.push(line.rejected_stages.clone());
        }
    }
    let sound = unsound.is_empty() && budgets_hold(&experiment, &golden);
    let failed_at = golden
        .lines
        .iter()
        .filter_map(|l| l.record.stage_log.iter().find(|s| !s.success).map(|s| s.stage.clone()))
        .next()
        .unwrap_or_else(|| "none".into());
    let rate = golden.summary.success_rate();
    Verdict {
        pass: sound && rate >= 0.5,
        tolerated: sound,
        detail: format!(
            "soundness {}/{checked} trials; golden success {}/{} (target 0.5, first failing stage {failed_at}); \
             dense control {}/{}",
            checked - unsound.len(),
            golden.summary.successes,
            golden.summary.trials,
            dense.summary.successes,
            dense.summary.trials
        ),
    }
}

fn copy_statistic() -> Verdict {
    let n = 200;
    let t = (n as f64).powf(1.5).ceil() as usize;
    let triangle = complete_pattern(3);
    let accept = FnChecker::new("none", |_: &Graph| true);
    let mut fractions = Vec::new();
    for seed in 0..5 {
        let mut strategy = BuyAll::new(t);
        let outcome = run_trial(n, t, &mut strategy, &accept, seed, false).unwrap();
        let report = copy_count_statistic(&outcome.final_bought, &triangle, t, t, 100.0, 0.05).unwrap();
        fractions.push(report.fraction_below);
    }
    let pass = fractions.iter().all(|&f| f >= 0.95);
    Verdict::exact(pass, format!("fraction_below over 5 seeds at (100, 0.05): {fractions:?}"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Verdict); 11] = [
        ("process invariants", process_invariants),
        ("analytic curves", analytic_curves),
        ("density oracle", density_oracle),
        ("checker equivalence", checker_equivalence),
        ("coupling exactness", coupling_exactness),
        ("FKG exact", fkg_exact),
        ("small-instance oracle", oracle_checks),
        ("partition strategy, perfect matching", perfect_matching),
        ("partition strategy, triangle factor", triangle_sweep),
        ("cycle-power soundness and golden run", ham_power),
        ("copy-count statistic", copy_statistic),
    ];
    let mut hard_failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = check();
        let status = match (verdict.pass, verdict.tolerated) {
            (true, _) => "PASS",
            (false, true) => "FAIL (target missed, invariants hold)",
            (false, false) => {
                hard_failures += 1;
                "FAIL"
            }
        };
        println!("criterion {:>2} {status}: {name} [{:.1}s] {}", i + 1, start.elapsed().as_secs_f64(), verdict.detail);
    }
    if hard_failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
