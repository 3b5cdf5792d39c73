use serde::{Deserialize, Serialize};

use crate::{Graph, GraphError};

/// An undirected edge stored as `(min, max)`.
pub type Edge = (usize, usize);

/// Number of edges of the complete graph on `n` vertices.
pub fn complete_edge_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

pub fn normalize(u: usize, v: usize) -> Edge {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Colexicographic rank of the edge `{u, v}`: `max(max-1)/2 + min`.
///
/// The rank does not depend on `n`, so the first `C(m, 2)` indices are the
/// edges of the complete graph on `0..m`.
pub fn edge_index(u: usize, v: usize) -> usize {
    debug_assert_ne!(u, v);
    let (a, b) = normalize(u, v);
    b * (b - 1) / 2 + a
}

/// Inverse of [`edge_index`].
pub fn edge_from_index(index: usize) -> Edge {
    let mut b = ((1.0 + (1.0 + 8.0 * index as f64).sqrt()) / 2.0) as usize;
    while b * (b - 1) / 2 > index {
        b -= 1;
    }
    while (b + 1) * b / 2 <= index {
        b += 1;
    }
    (index - b * (b - 1) / 2, b)
}

/// An ordered list of distinct edges on `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeSequence {
    n: usize,
    edges: Vec<Edge>,
}

impl EdgeSequence {
    /// Validates loop-freeness, range and distinctness; edges are normalized.
    pub fn new(n: usize, edges: Vec<Edge>) -> Result<Self, GraphError> {
        let mut seen = Graph::empty(n);
        let mut normalized = Vec::with_capacity(edges.len());
        for (i, &(u, v)) in edges.iter().enumerate() {
            if u == v || u >= n || v >= n {
                return Err(GraphError::Parameter(format!("edge {i} = ({u}, {v}) is not a pair of distinct vertices below {n}")));
            }
            if !seen.add_edge(u, v) {
                return Err(GraphError::Parameter(format!("edge {i} = ({u}, {v}) repeats an earlier edge")));
            }
            normalized.push(normalize(u, v));
        }
        Ok(EdgeSequence { n, edges: normalized })
    }

    pub(crate) fn from_trusted(n: usize, edges: Vec<Edge>) -> Self {
        EdgeSequence { n, edges }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Graph spanned by the first `m` edges.
    pub fn prefix_graph(&self, m: usize) -> Graph {
        let mut g = Graph::empty(self.n);
        for &(u, v) in &self.edges[..m.min(self.edges.len())] {
            g.add_edge(u, v);
        }
        g
    }

    pub fn to_graph(&self) -> Graph {
        self.prefix_graph(self.edges.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_counts() {
        assert_eq!(complete_edge_count(0), 0);
        assert_eq!(complete_edge_count(1), 0);
        assert_eq!(complete_edge_count(3), 3);
        assert_eq!(complete_edge_count(100), 4950);
    }

    #[test]
    fn index_is_a_bijection_onto_prefix() {
        let n = 70;
        let mut seen = vec![false; complete_edge_count(n)];
        for b in 0..n {
            for a in 0..b {
                let i = edge_index(b, a);
                assert!(!seen[i]);
                seen[i] = true;
                assert_eq!(edge_from_index(i), (a, b));
            }
        }
        assert!(seen.into_iter().all(|s| s));
    }

    #[test]
    fn index_inverse_for_large_values() {
        for i in [0usize, 1, 2, 3, 1_000_000, 49_995_000, 123_456_789_012] {
            let (a, b) = edge_from_index(i);
            assert!(a < b);
            assert_eq!(edge_index(a, b), i);
        }
    }

    #[test]
    fn sequence_rejects_repeats_and_loops() {
        assert!(EdgeSequence::new(3, vec![(0, 1), (1, 0)]).is_err());
        assert!(EdgeSequence::new(3, vec![(2, 2)]).is_err());
        assert!(EdgeSequence::new(3, vec![(0, 3)]).is_err());
        let seq = EdgeSequence::new(3, vec![(2, 0), (1, 2)]).unwrap();
        assert_eq!(seq.edges(), &[(0, 2), (1, 2)]);
        assert_eq!(seq.prefix_graph(1).edge_count(), 1);
    }
}
