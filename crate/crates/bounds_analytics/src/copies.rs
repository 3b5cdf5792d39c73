use graph_core::Graph;
use serde::Serialize;
use structure_checkers::count_copies_at;

use crate::BoundsError;

/// Result of the greedy vertex-removal statistic.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CopyCountReport {
    /// Surviving vertices in increasing order.
    pub vertices: Vec<usize>,
    /// Largest copy count through a surviving vertex, within the survivors.
    pub max_count: u64,
    /// `|V| / n`.
    pub fraction_below: f64,
    /// `λ b^{v-1} t^{e-v+1} n^{v-2e-1}`.
    pub threshold: f64,
    /// Smallest `λ` for which every survivor is within the bound.
    pub minimal_lambda: f64,
    pub removed: usize,
}

/// `λ · b^{v(F)-1} · t^{e(F)-v(F)+1} · n^{v(F)-2e(F)-1}`.
pub fn copy_threshold(n: usize, pattern: &Graph, t: usize, b: usize, lambda: f64) -> f64 {
    let (v, e) = (pattern.n() as f64, pattern.edge_count() as f64);
    lambda * (b as f64).powf(v - 1.0) * (t as f64).powf(e - v + 1.0) * (n as f64).powf(v - 2.0 * e - 1.0)
}

/// Removes the vertex with most copies of `pattern` through it until every
/// survivor is within [`copy_threshold`] or more than `epsilon · n`
/// vertices are gone.
pub fn copy_count_statistic(
    bought: &Graph,
    pattern: &Graph,
    t: usize,
    b: usize,
    lambda: f64,
    epsilon: f64,
) -> Result<CopyCountReport, BoundsError> {
    if !(lambda > 0.0) || !(0.0..=1.0).contains(&epsilon) {
        return Err(BoundsError::Parameter(format!("need λ > 0 and ε in [0, 1], got {lambda}, {epsilon}")));
    }
    let n = bought.n();
    let threshold = copy_threshold(n, pattern, t, b, lambda);
    let max_removed = (epsilon * n as f64).floor() as usize;
    let mut vertices: Vec<usize> = (0..n).collect();
    let mut removed = 0;
    let (max_count, vertices) = loop {
        let host = bought.induced(&vertices);
        let counts = (0..vertices.len())
            .map(|i| count_copies_at(&host, pattern, i))
            .collect::<Result<Vec<u64>, _>>()
            .map_err(|e| BoundsError::Capacity(e.to_string()))?;
        let worst = (0..counts.len()).max_by_key(|&i| (counts[i], std::cmp::Reverse(i)));
        let max_count = worst.map_or(0, |i| counts[i]);
        match worst {
            Some(i) if max_count as f64 > threshold && removed <= max_removed => {
                vertices.remove(i);
                removed += 1;
            }
            _ => break (max_count, vertices),
        }
    };
    let unit = threshold / lambda;
    Ok(CopyCountReport {
        fraction_below: if n == 0 { 1.0 } else { vertices.len() as f64 / n as f64 },
        vertices,
        max_count,
        threshold,
        minimal_lambda: if unit > 0.0 { max_count as f64 / unit } else { f64::INFINITY },
        removed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use pattern_tools::{complete_pattern, path_power};

    #[test]
    fn empty_graph_keeps_everything() {
        let report = copy_count_statistic(&Graph::empty(20), &complete_pattern(3), 50, 50, 1.0, 0.1).unwrap();
        assert_eq!(report.vertices.len(), 20);
        assert_eq!(report.fraction_below, 1.0);
        assert_eq!((report.max_count, report.removed), (0, 0));
    }

    #[test]
    fn tree_threshold_drops_the_time_factor() {
        let path = path_power(3, 1);
        let (n, b) = (100usize, 300usize);
        for t in [400, 4000] {
            let expected = 2.0 * (b as f64 / n as f64).powi(2);
            assert!((copy_threshold(n, &path, t, b, 2.0) - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn dense_spot_is_removed() {
        let mut g = Graph::empty(30);
        for u in 0..6 {
            for v in u + 1..6 {
                g.add_edge(u, v);
            }
        }
        let report = copy_count_statistic(&g, &complete_pattern(3), 30, 30, 0.5, 0.2).unwrap();
        assert!(report.removed >= 1 && report.removed <= 7);
        assert!(report.max_count as f64 <= report.threshold || report.removed > 6);
    }
}
