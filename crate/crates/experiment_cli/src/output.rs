use sha2::{Digest, Sha256};

use crate::experiment::{ExperimentResult, Summary};

pub const SUMMARY_COLUMNS: &str = "strategy,n,t,b,trials,successes,mean_budget_used,seconds";

/// Lowercase hex SHA-256 of `bytes`.
pub fn config_hash(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

/// `# experiment_cli <version> config_sha256=<hash> seed=<seed>`.
pub fn header_line(hash: &str, seed: Option<u64>) -> String {
    let seed = seed.map_or_else(|| "none".to_string(), |s| s.to_string());
    format!("# experiment_cli {} config_sha256={hash} seed={seed}", env!("CARGO_PKG_VERSION"))
}

/// Header, column line and one data row; `seconds` has three decimals.
pub fn summary_csv(header: &str, summary: &Summary, seconds: f64) -> String {
    format!(
        "{header}\n{SUMMARY_COLUMNS}\n{},{},{},{},{},{},{:.3},{:.3}\n",
        summary.strategy,
        summary.n,
        summary.t,
        summary.b,
        summary.trials,
        summary.successes,
        summary.mean_budget_used,
        seconds
    )
}

/// Header followed by one JSON object per trial, in trial order.
pub fn trials_jsonl(header: &str, result: &ExperimentResult) -> String {
    let mut out = format!("{header}\n");
    for line in &result.lines {
        out.push_str(&serde_json::to_string(line).expect("trial lines serialize"));
        out.push('\n');
    }
    out
}
