use std::fmt::Write as _;

use crate::bitset::{count_and, iter_words, word_count};
use crate::edges::{normalize, Edge};
use crate::{GraphError, VertexSet};

/// Undirected simple graph on `0..n` with one adjacency bitset per vertex.
///
/// Invariants: adjacency is symmetric, there are no loops, and
/// `edge_count` equals half the sum of degrees.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Graph {
    n: usize,
    words: usize,
    adjacency: Vec<u64>,
    edge_count: usize,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        let words = word_count(n);
        Graph { n, words, adjacency: vec![0; n * words], edge_count: 0 }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    /// Builds a graph, rejecting loops and out-of-range endpoints. Repeated
    /// edges are merged.
    pub fn from_edges<I: IntoIterator<Item = Edge>>(n: usize, edges: I) -> Result<Self, GraphError> {
        let mut g = Graph::empty(n);
        for (u, v) in edges {
            if u == v || u >= n || v >= n {
                return Err(GraphError::Parameter(format!("({u}, {v}) is not an edge on {n} vertices")));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn row(&self, u: usize) -> &[u64] {
        &self.adjacency[u * self.words..(u + 1) * self.words]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adjacency[u * self.words + v / 64] & (1 << (v % 64)) != 0
    }

    /// Returns `true` if the edge is new. Panics on loops or out-of-range ids.
    pub fn add_edge(&mut self, u: usize, v: usize) -> bool {
        assert!(u != v && u < self.n && v < self.n, "invalid edge ({u}, {v}) on {} vertices", self.n);
        if self.has_edge(u, v) {
            return false;
        }
        self.adjacency[u * self.words + v / 64] |= 1 << (v % 64);
        self.adjacency[v * self.words + u / 64] |= 1 << (u % 64);
        self.edge_count += 1;
        true
    }

    /// Returns `true` if the edge was present.
    pub fn remove_edge(&mut self, u: usize, v: usize) -> bool {
        if !self.has_edge(u, v) {
            return false;
        }
        self.adjacency[u * self.words + v / 64] &= !(1 << (v % 64));
        self.adjacency[v * self.words + u / 64] &= !(1 << (u % 64));
        self.edge_count -= 1;
        true
    }

    pub fn degree(&self, u: usize) -> usize {
        self.row(u).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        iter_words(self.row(u))
    }

    pub fn neighbor_set(&self, u: usize) -> VertexSet {
        VertexSet::from_iter_with_capacity(self.n, self.neighbors(u))
    }

    /// `|N(u) ∩ set|`.
    pub fn degree_into(&self, u: usize, set: &VertexSet) -> usize {
        count_and(self.row(u), set.words())
    }

    pub fn common_neighbor_count(&self, u: usize, v: usize) -> usize {
        count_and(self.row(u), self.row(v))
    }

    /// All edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        (0..self.n).flat_map(move |u| self.neighbors(u).filter(move |&v| v > u).map(move |v| (u, v)))
    }

    pub fn is_subgraph_of(&self, other: &Graph) -> bool {
        self.n == other.n && self.adjacency.iter().zip(&other.adjacency).all(|(a, b)| a & !b == 0)
    }

    pub fn union_with(&mut self, other: &Graph) {
        assert_eq!(self.n, other.n);
        for (u, v) in other.edges() {
            self.add_edge(u, v);
        }
    }

    /// Edges of `self` that are not in `other`.
    pub fn difference(&self, other: &Graph) -> Graph {
        let mut g = Graph::empty(self.n);
        for (u, v) in self.edges() {
            if !other.has_edge(u, v) {
                g.add_edge(u, v);
            }
        }
        g
    }

    /// Subgraph induced by `vertices`, relabelled so that `vertices[i]`
    /// becomes `i`.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut g = Graph::empty(vertices.len());
        for (i, &u) in vertices.iter().enumerate() {
            for (j, &v) in vertices.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    /// Same vertex set, keeping only edges with both endpoints in `set`.
    pub fn restricted_to(&self, set: &VertexSet) -> Graph {
        let mut g = Graph::empty(self.n);
        for u in set.iter() {
            for v in self.neighbors(u) {
                if v > u && set.contains(v) {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }

    /// Edge-list text: `"n m"` then one `"u v"` line per edge with `u < v`.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{} {}", self.n, self.edge_count).expect("writing to a String cannot fail");
        for (u, v) in self.edges() {
            writeln!(out, "{u} {v}").expect("writing to a String cannot fail");
        }
        out
    }

    /// Parses the edge-list format. Blank lines and lines starting with `#`
    /// are ignored; the edge count in the header must match.
    pub fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (header_line, header) =
            lines.next().ok_or(GraphError::Parse { line: 0, message: "missing \"n m\" header".into() })?;
        let (n, m) = parse_pair(header_line, header)?;
        let mut g = Graph::empty(n);
        for (line, text) in lines {
            let (u, v) = parse_pair(line, text)?;
            if u >= v || v >= n {
                return Err(GraphError::Parse { line, message: format!("edge \"{text}\" must satisfy u < v < {n}") });
            }
            if !g.add_edge(u, v) {
                return Err(GraphError::Parse { line, message: format!("duplicate edge \"{text}\"") });
            }
        }
        if g.edge_count != m {
            return Err(GraphError::Parse {
                line: header_line,
                message: format!("header declares {m} edges but {} were listed", g.edge_count),
            });
        }
        Ok(g)
    }

    pub fn has_normalized_edge(&self, e: Edge) -> bool {
        let (u, v) = normalize(e.0, e.1);
        self.has_edge(u, v)
    }
}

fn parse_pair(line: usize, text: &str) -> Result<(usize, usize), GraphError> {
    let mut fields = text.split_whitespace();
    let mut next = || -> Result<usize, GraphError> {
        fields
            .next()
            .ok_or_else(|| GraphError::Parse { line, message: format!("expected two integers in \"{text}\"") })?
            .parse()
            .map_err(|_| GraphError::Parse { line, message: format!("non-integer field in \"{text}\"") })
    };
    let pair = (next()?, next()?);
    if fields.next().is_some() {
        return Err(GraphError::Parse { line, message: format!("trailing fields in \"{text}\"") });
    }
    Ok(pair)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_invariants(g: &Graph) {
        let mut degree_sum = 0;
        for u in 0..g.n() {
            assert!(!g.has_edge(u, u));
            for v in g.neighbors(u) {
                assert!(g.has_edge(v, u));
            }
            degree_sum += g.degree(u);
        }
        assert_eq!(degree_sum, 2 * g.edge_count());
    }

    #[test]
    fn complete_graph_counts() {
        let g = Graph::complete(70);
        assert_eq!(g.edge_count(), 70 * 69 / 2);
        assert_eq!(g.degree(69), 69);
        assert_invariants(&g);
    }

    #[test]
    fn add_remove_edges() {
        let mut g = Graph::empty(5);
        assert!(g.add_edge(3, 1));
        assert!(!g.add_edge(1, 3));
        assert!(g.has_edge(1, 3));
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(1, 3)]);
        assert!(g.remove_edge(3, 1));
        assert!(!g.remove_edge(3, 1));
        assert_eq!(g.edge_count(), 0);
        assert_invariants(&g);
    }

    #[test]
    #[should_panic]
    fn loops_are_rejected() {
        Graph::empty(3).add_edge(2, 2);
    }

    #[test]
    fn edge_list_roundtrip() {
        let g = Graph::from_edges(6, [(0, 1), (4, 2), (5, 0)]).unwrap();
        let text = g.to_edge_list();
        assert_eq!(text, "6 3\n0 1\n0 5\n2 4\n");
        assert_eq!(Graph::parse_edge_list(&text).unwrap(), g);
    }

    #[test]
    fn edge_list_errors() {
        assert!(Graph::parse_edge_list("").is_err());
        assert!(Graph::parse_edge_list("3 1\n1 0\n").is_err());
        assert!(Graph::parse_edge_list("3 2\n0 1\n").is_err());
        assert!(Graph::parse_edge_list("3 2\n0 1\n0 1\n").is_err());
        assert!(Graph::parse_edge_list("3 1\n0 x\n").is_err());
    }

    #[test]
    fn induced_and_restricted() {
        let g = Graph::complete(5);
        let h = g.induced(&[4, 2, 0]);
        assert_eq!(h.n(), 3);
        assert_eq!(h.edge_count(), 3);
        let r = g.restricted_to(&VertexSet::from_iter_with_capacity(5, [1, 2]));
        assert_eq!(r.edges().collect::<Vec<_>>(), vec![(1, 2)]);
        assert!(r.is_subgraph_of(&g));
        assert_eq!(g.difference(&r).edge_count(), 9);
    }
}
