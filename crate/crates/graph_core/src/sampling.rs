use std::collections::HashSet;

use rand::Rng;

use crate::edges::{complete_edge_count, edge_from_index};
use crate::{EdgeSequence, Graph, GraphError};

/// The first `t` edges of a uniformly random ordering of `E(K_n)`.
///
/// Sparse prefixes (`2t <= M`) use rejection against the set of drawn edge
/// indices; dense prefixes run a partial Fisher–Yates shuffle over all `M`
/// indices. Either way every ordered `t`-tuple of distinct edges is equally
/// likely.
pub fn sample_process_prefix<R: Rng + ?Sized>(n: usize, t: usize, rng: &mut R) -> Result<EdgeSequence, GraphError> {
    let total = complete_edge_count(n);
    if t > total {
        return Err(GraphError::Parameter(format!("t = {t} exceeds M = {total} for n = {n}")));
    }
    let mut edges = Vec::with_capacity(t);
    if 2 * t <= total {
        let mut drawn = HashSet::with_capacity(t);
        while edges.len() < t {
            let index = rng.gen_range(0..total);
            if drawn.insert(index) {
                edges.push(edge_from_index(index));
            }
        }
    } else {
        let mut indices: Vec<usize> = (0..total).collect();
        for i in 0..t {
            let j = rng.gen_range(i..total);
            indices.swap(i, j);
            edges.push(edge_from_index(indices[i]));
        }
    }
    Ok(EdgeSequence::from_trusted(n, edges))
}

/// Binomial random graph: each of the `M` edges independently with
/// probability `p`, drawn in canonical index order.
pub fn sample_gnp<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Result<Graph, GraphError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(GraphError::Parameter(format!("edge probability {p} outside [0, 1]")));
    }
    let mut g = Graph::empty(n);
    for index in 0..complete_edge_count(n) {
        if rng.gen_bool(p) {
            let (u, v) = edge_from_index(index);
            g.add_edge(u, v);
        }
    }
    Ok(g)
}

/// Uniform random graph with exactly `m` edges.
pub fn sample_gnm<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Result<Graph, GraphError> {
    let total = complete_edge_count(n);
    if m > total {
        return Err(GraphError::Parameter(format!("m = {m} exceeds M = {total} for n = {n}")));
    }
    Ok(sample_process_prefix(n, m, rng)?.to_graph())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn prefix_edge_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(sample_process_prefix(5, 0, &mut rng).unwrap().is_empty());
        let full = sample_process_prefix(4, 6, &mut rng).unwrap();
        assert_eq!(full.to_graph(), Graph::complete(4));
        assert!(sample_process_prefix(4, 7, &mut rng).is_err());
        assert!(sample_process_prefix(1, 0, &mut rng).unwrap().is_empty());
    }

    #[test]
    fn both_regimes_give_distinct_edges() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for t in [10, 2000, 4000, 4950] {
            let seq = sample_process_prefix(100, t, &mut rng).unwrap();
            assert_eq!(seq.len(), t);
            assert_eq!(seq.to_graph().edge_count(), t);
        }
    }

    #[test]
    fn gnp_extremes_and_errors() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert_eq!(sample_gnp(7, 0.0, &mut rng).unwrap().edge_count(), 0);
        assert_eq!(sample_gnp(7, 1.0, &mut rng).unwrap(), Graph::complete(7));
        assert!(sample_gnp(7, 1.5, &mut rng).is_err());
        assert!(sample_gnp(7, -0.1, &mut rng).is_err());
        assert!(sample_gnp(7, f64::NAN, &mut rng).is_err());
    }

    #[test]
    fn gnm_extremes_and_errors() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        assert_eq!(sample_gnm(6, 0, &mut rng).unwrap().edge_count(), 0);
        assert_eq!(sample_gnm(6, 15, &mut rng).unwrap(), Graph::complete(6));
        assert!(sample_gnm(6, 16, &mut rng).is_err());
    }

    #[test]
    fn seeded_sampling_is_reproducible() {
        let a = sample_process_prefix(50, 300, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let b = sample_process_prefix(50, 300, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        assert_eq!(a, b);
    }
}
