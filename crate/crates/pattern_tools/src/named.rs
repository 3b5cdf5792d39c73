use graph_core::Graph;

use crate::PatternError;

pub fn complete_pattern(r: usize) -> Graph {
    Graph::complete(r)
}

/// `P_q^k`: vertices `0..q` in path order, with `i ~ j` iff `0 < |i - j| <= k`.
pub fn path_power(q: usize, k: usize) -> Graph {
    let mut g = Graph::empty(q);
    for i in 0..q {
        for j in i + 1..q.min(i + k + 1) {
            g.add_edge(i, j);
        }
    }
    g
}

/// Resolves `"K2"`..`"K12"`, `"Pq^k:q=…,k=…"`, or an edge-list text.
pub fn parse_pattern(spec: &str) -> Result<Graph, PatternError> {
    let trimmed = spec.trim();
    if let Some(r) = trimmed.strip_prefix('K').and_then(|rest| rest.parse::<usize>().ok()) {
        if !(2..=crate::MAX_PATTERN_VERTICES).contains(&r) {
            return Err(PatternError::Parameter(format!("clique size {r} outside 2..={}", crate::MAX_PATTERN_VERTICES)));
        }
        return Ok(complete_pattern(r));
    }
    if let Some(args) = trimmed.strip_prefix("Pq^k:") {
        let (mut q, mut k) = (None, None);
        for field in args.split(',') {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| PatternError::Parameter(format!("expected key=value in \"{field}\"")))?;
            let value: usize = value
                .trim()
                .parse()
                .map_err(|_| PatternError::Parameter(format!("non-integer value in \"{field}\"")))?;
            match key.trim() {
                "q" => q = Some(value),
                "k" => k = Some(value),
                other => return Err(PatternError::Parameter(format!("unknown path-power key \"{other}\""))),
            }
        }
        return match (q, k) {
            (Some(q), Some(k)) if q >= 2 && k >= 1 => Ok(path_power(q, k)),
            _ => Err(PatternError::Parameter(format!("path power needs q >= 2 and k >= 1 in \"{trimmed}\""))),
        };
    }
    if trimmed.contains('\n') {
        return Ok(Graph::parse_edge_list(trimmed)?);
    }
    Err(PatternError::Parameter(format!("unknown pattern \"{trimmed}\"")))
}
