use graph_core::Graph;

use crate::CheckError;

/// Whether `G` contains the `k`-th power of the Hamilton cycle visiting
/// `order` cyclically: every pair at cyclic distance at most `k` in `order`
/// must be an edge.
pub fn verify_ham_power(g: &Graph, order: &[usize], k: usize) -> Result<bool, CheckError> {
    let n = g.n();
    if k == 0 {
        return Err(CheckError::Parameter("power must be at least 1".into()));
    }
    if n <= 2 * k {
        return Err(CheckError::Parameter(format!("need n > 2k, got n = {n}, k = {k}")));
    }
    if order.len() != n {
        return Err(CheckError::Parameter(format!("order has {} entries for {n} vertices", order.len())));
    }
    let mut seen = vec![false; n];
    for &v in order {
        if v >= n || std::mem::replace(&mut seen[v], true) {
            return Err(CheckError::Parameter(format!("order is not a permutation (entry {v})")));
        }
    }
    Ok((0..n).all(|i| (1..=k).all(|d| g.has_edge(order[i], order[(i + d) % n]))))
}

/// Whether consecutive windows of `k + 1` entries of `sequence` are cliques
/// in `G`, i.e. `G` contains the `k`-th power of the path `sequence`.
pub fn contains_path_power(g: &Graph, sequence: &[usize], k: usize) -> bool {
    (0..sequence.len()).all(|i| (1..=k).all(|d| i + d >= sequence.len() || g.has_edge(sequence[i], sequence[i + d])))
}
