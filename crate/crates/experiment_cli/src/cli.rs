use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use bounds_analytics::{curve_table, BoundFamily, BoundKind, BoundSpec, CSV_HEADER};
use clap::{Parser, Subcommand, ValueEnum};
use couplings::{check_fkg_exact, fkg_catalogue_pairs, validate_multistage, validate_sandwich_marginal};
use graph_core::Graph;
use num_rational::Rational64;
use pattern_tools::parse_pattern;
use serde_json::json;
use small_oracle::{decision_tree_value, solve};
use structure_checkers::{count_copies, has_f_factor, is_connected, min_degree};

use crate::experiment::Experiment;
use crate::output::{config_hash, header_line, summary_csv, trials_jsonl};
use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "experiment_cli", version, about = "Budget-constrained random graph process experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a batch of trials described by a configuration file.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: u64,
        /// Worker threads; 0 uses every core.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[arg(long)]
        out_dir: PathBuf,
        /// Write measured wall time into summary.csv instead of 0.000.
        #[arg(long)]
        record_timing: bool,
    },
    /// Budget-exponent curves as CSV.
    Curves {
        #[arg(long, value_enum)]
        family: FamilyArg,
        /// `r`, `k`, or a pattern such as `K4`; repeatable.
        #[arg(long = "param", required = true)]
        params: Vec<String>,
        #[arg(long, value_enum, default_value_t = KindArg::LowerBound)]
        kind: KindArg,
        /// Fold in polylogarithmic factors at this `n`.
        #[arg(long)]
        n: Option<u64>,
        /// Grid points per curve, spanning its valid range.
        #[arg(long, default_value_t = 50)]
        points: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Exact optimal success probability on a tiny instance.
    Oracle {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        b: usize,
        #[arg(long, value_enum)]
        checker: OracleChecker,
        /// Recompute the value over full histories as well.
        #[arg(long)]
        cross_check: bool,
        /// Include every state value in the output.
        #[arg(long)]
        dump: bool,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Validate the coupling samplers or the exact correlation check.
    CouplingTest {
        #[arg(long, value_enum)]
        kind: CouplingKind,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum FamilyArg {
    CliqueFactor,
    FFactor,
    HamPower,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum KindArg {
    LowerBound,
    StrategyBudgetFull,
    StrategyBudgetPartial,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum OracleChecker {
    Edge,
    Cherry,
    Triangle,
    PerfectMatching,
    Connected,
    MinDegree1,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum CouplingKind {
    Multistage,
    Sandwich,
    Fkg,
}

fn oracle_predicate(checker: OracleChecker) -> fn(&Graph) -> bool {
    match checker {
        OracleChecker::Edge => |g| g.edge_count() > 0,
        OracleChecker::Cherry => |g| (0..g.n()).any(|v| g.degree(v) >= 2),
        OracleChecker::Triangle => {
            |g| g.n() >= 3 && count_copies(g, &pattern_tools::complete_pattern(3)).unwrap_or(0) > 0
        }
        OracleChecker::PerfectMatching => |g| {
            g.n() % 2 == 0 && matches!(has_f_factor(g, &pattern_tools::complete_pattern(2)), Ok(Some(_)))
        },
        OracleChecker::Connected => is_connected,
        OracleChecker::MinDegree1 => |g| min_degree(g) >= 1,
    }
}

fn write_output(out_dir: Option<&Path>, file: &str, text: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    match out_dir {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            fs::write(dir.join(file), text)?;
        }
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn meta(hash: &str, seed: Option<u64>) -> serde_json::Value {
    json!({ "tool": "experiment_cli", "version": env!("CARGO_PKG_VERSION"), "config_sha256": hash, "seed": seed })
}

fn ratio(q: Rational64) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

fn curves(
    family: FamilyArg,
    params: &[String],
    kind: KindArg,
    n: Option<u64>,
    points: usize,
) -> Result<String, CliError> {
    if points < 2 {
        return Err(CliError::Usage("--points must be at least 2".into()));
    }
    let kind = match kind {
        KindArg::LowerBound => BoundKind::LowerBound,
        KindArg::StrategyBudgetFull => BoundKind::StrategyBudgetFull,
        KindArg::StrategyBudgetPartial => BoundKind::StrategyBudgetPartial,
    };
    let mut csv = format!("{CSV_HEADER}\n");
    for param in params {
        let bad = |message: String| CliError::Usage(format!("--param {param}: {message}"));
        let family = match family {
            FamilyArg::CliqueFactor => BoundFamily::CliqueFactor(param.parse().map_err(|e| bad(format!("{e}")))?),
            FamilyArg::HamPower => BoundFamily::HamPower(param.parse().map_err(|e| bad(format!("{e}")))?),
            FamilyArg::FFactor => {
                let pattern = parse_pattern(param).map_err(|e| bad(e.to_string()))?;
                BoundFamily::f_factor(&pattern).map_err(|e| bad(e.to_string()))?
            }
        };
        let spec = BoundSpec::new(family, kind).map_err(|e| bad(e.to_string()))?;
        let (lo, hi) = spec.valid_range();
        let (lo, hi) = (*lo.numer() as f64 / *lo.denom() as f64, *hi.numer() as f64 / *hi.denom() as f64);
        let grid: Vec<f64> = (0..points).map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64).collect();
        let table = curve_table(&[spec], n, &grid);
        csv.extend(table.lines().skip(1).flat_map(|l| [l, "\n"]));
    }
    Ok(csv)
}

fn coupling_report(kind: CouplingKind, seed: u64, jobs: usize, samples: Option<usize>) -> Result<serde_json::Value, CliError> {
    let run = |e: couplings::CouplingError| CliError::Run(e.to_string());
    Ok(match kind {
        CouplingKind::Multistage => {
            let samples = samples.unwrap_or(100_000);
            let report = validate_multistage(4, &[2, 2], &[0.3, 0.3], &[0.05, 0.05], samples, seed, jobs).map_err(run)?;
            json!({ "kind": "multistage", "n": 4, "stage_lengths": [2, 2], "p": [0.3, 0.3], "p_bar": [0.05, 0.05], "report": report })
        }
        CouplingKind::Sandwich => {
            let samples = samples.unwrap_or(20_000);
            let report = validate_sandwich_marginal(4, 3, 0.3, 0.7, samples, seed, jobs).map_err(run)?;
            json!({ "kind": "sandwich", "n": 4, "m": 3, "p": 0.3, "p_prime": 0.7, "report": report })
        }
        CouplingKind::Fkg => {
            let mut checks = Vec::new();
            for (f, g) in fkg_catalogue_pairs() {
                for n in [3, 4] {
                    for p in [Rational64::new(1, 4), Rational64::new(1, 2)] {
                        let r = check_fkg_exact(n, p, &f.eval, &g.eval).map_err(run)?;
                        checks.push(json!({
                            "f": f.name, "g": g.name, "n": n, "p": ratio(p),
                            "e_fg": ratio(r.e_fg), "e_f": ratio(r.e_f), "e_g": ratio(r.e_g), "holds": r.holds,
                        }));
                    }
                }
            }
            let all = checks.iter().all(|c| c["holds"] == true);
            json!({ "kind": "fkg", "all_hold": all, "checks": checks })
        }
    })
}

/// Executes one parsed command, writing to `out_dir` or `stdout`.
pub fn run_cli(cli: &Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Simulate { config, seed, jobs, out_dir, record_timing } => {
            let text = fs::read_to_string(config).map_err(|e| CliError::Config {
                field: "--config".into(),
                message: format!("cannot read {}: {e}", config.display()),
            })?;
            let experiment = Experiment::from_config_text(&text)?;
            let header = header_line(&config_hash(text.as_bytes()), Some(*seed));
            let start = Instant::now();
            let result = experiment.run(*seed, *jobs)?;
            let elapsed = start.elapsed().as_secs_f64();
            let seconds = if *record_timing { elapsed } else { 0.0 };
            fs::create_dir_all(out_dir)?;
            fs::write(out_dir.join("trials.jsonl"), trials_jsonl(&header, &result))?;
            fs::write(out_dir.join("summary.csv"), summary_csv(&header, &result.summary, seconds))?;
            let params = json!({ "meta": meta(&config_hash(text.as_bytes()), Some(*seed)), "derived": experiment.derived });
            fs::write(out_dir.join("params.json"), serde_json::to_string_pretty(&params).expect("json") + "\n")?;
            eprintln!(
                "{}: {}/{} successes, mean budget used {:.1} of {}, {elapsed:.2}s",
                result.summary.strategy,
                result.summary.successes,
                result.summary.trials,
                result.summary.mean_budget_used,
                result.summary.b
            );
            Ok(())
        }
        Command::Curves { family, params, kind, n, points, seed, out_dir } => {
            let csv = curves(*family, params, *kind, *n, *points)?;
            let args = format!("{family:?} {params:?} {kind:?} {n:?} {points}");
            let text = format!("{}\n{csv}", header_line(&config_hash(args.as_bytes()), *seed));
            write_output(out_dir.as_deref(), "curves.csv", &text, stdout)
        }
        Command::Oracle { n, t, b, checker, cross_check, dump, seed, out_dir } => {
            let predicate = oracle_predicate(*checker);
            let table = solve(*n, *t, *b, &predicate).map_err(|e| CliError::Usage(e.to_string()))?;
            let value = table.value();
            let mut out = json!({
                "meta": meta(&config_hash(format!("{n} {t} {b} {checker:?}").as_bytes()), *seed),
                "n": n, "t": t, "b": b, "checker": format!("{checker:?}"),
                "value": ratio(value),
                "value_f64": *value.numer() as f64 / *value.denom() as f64,
            });
            if *cross_check {
                let tree = decision_tree_value(*n, *t, *b, &predicate).map_err(|e| CliError::Usage(e.to_string()))?;
                out["decision_tree_value"] = json!(ratio(tree));
                out["routes_agree"] = json!(tree == value);
            }
            if *dump {
                out["table"] = serde_json::to_value(table.dump()).expect("json");
            }
            write_output(out_dir.as_deref(), "oracle.json", &(serde_json::to_string_pretty(&out).expect("json") + "\n"), stdout)
        }
        Command::CouplingTest { kind, seed, jobs, samples, out_dir } => {
            let mut out = coupling_report(*kind, *seed, *jobs, *samples)?;
            out["meta"] = meta(&config_hash(format!("{kind:?} {samples:?}").as_bytes()), Some(*seed));
            let file = "coupling.json";
            write_output(out_dir.as_deref(), file, &(serde_json::to_string_pretty(&out).expect("json") + "\n"), stdout)
        }
    }
}
