//! Maximum 1-density of graphs too large for subset enumeration.
//!
//! For a candidate `λ = a/b`, a denser subgraph exists iff some vertex set
//! `S` with `|S| >= 2` has `b·e(S) - a·(|S| - 1) > 0`. With one vertex forced
//! into `S`, maximising `b·e(S) - a·|S|` is a maximum-closure problem (edge
//! items of profit `b` require both endpoint items of cost `a`), solved by a
//! minimum cut. Dinkelbach iteration then raises `λ` to the density of the
//! best set found until no set beats it.

use std::collections::VecDeque;

use graph_core::Graph;

use crate::{Density, PatternError};

struct FlowNetwork {
    head: Vec<Vec<usize>>,
    to: Vec<usize>,
    capacity: Vec<i64>,
}

impl FlowNetwork {
    fn new(nodes: usize) -> Self {
        FlowNetwork { head: vec![Vec::new(); nodes], to: Vec::new(), capacity: Vec::new() }
    }

    fn add_arc(&mut self, from: usize, to: usize, capacity: i64) {
        self.head[from].push(self.to.len());
        self.to.push(to);
        self.capacity.push(capacity);
        self.head[to].push(self.to.len());
        self.to.push(from);
        self.capacity.push(0);
    }

    fn levels(&self, source: usize) -> Vec<i32> {
        let mut level = vec![-1; self.head.len()];
        level[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for &arc in &self.head[u] {
                let v = self.to[arc];
                if self.capacity[arc] > 0 && level[v] < 0 {
                    level[v] = level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        level
    }

    fn augment(&mut self, u: usize, sink: usize, pushed: i64, level: &[i32], next: &mut [usize]) -> i64 {
        if u == sink {
            return pushed;
        }
        while next[u] < self.head[u].len() {
            let arc = self.head[u][next[u]];
            let v = self.to[arc];
            if self.capacity[arc] > 0 && level[v] == level[u] + 1 {
                let got = self.augment(v, sink, pushed.min(self.capacity[arc]), level, next);
                if got > 0 {
                    self.capacity[arc] -= got;
                    self.capacity[arc ^ 1] += got;
                    return got;
                }
            }
            next[u] += 1;
        }
        0
    }

    /// Runs Dinic's algorithm and returns the nodes on the source side of a
    /// minimum cut.
    fn min_cut_source_side(&mut self, source: usize, sink: usize) -> Vec<bool> {
        loop {
            let level = self.levels(source);
            if level[sink] < 0 {
                return level.iter().map(|&l| l >= 0).collect();
            }
            let mut next = vec![0; self.head.len()];
            while self.augment(source, sink, i64::MAX, &level, &mut next) > 0 {}
        }
    }
}

/// Densest vertex set containing `forced` under the parametric objective,
/// returned as a vertex membership vector.
fn best_set_with(g: &Graph, edges: &[(usize, usize)], forced: usize, lambda: Density) -> Vec<bool> {
    let (a, b) = (*lambda.numer(), *lambda.denom());
    let (source, sink) = (0, 1);
    let vertex_node = |v: usize| 2 + v;
    let edge_node = |i: usize| 2 + g.n() + i;
    let infinite = b * edges.len() as i64 + 1;
    let mut network = FlowNetwork::new(2 + g.n() + edges.len());
    for (i, &(u, v)) in edges.iter().enumerate() {
        network.add_arc(source, edge_node(i), b);
        network.add_arc(edge_node(i), vertex_node(u), infinite);
        network.add_arc(edge_node(i), vertex_node(v), infinite);
    }
    for v in 0..g.n() {
        if v != forced {
            network.add_arc(vertex_node(v), sink, a);
        }
    }
    let side = network.min_cut_source_side(source, sink);
    let mut members: Vec<bool> = (0..g.n()).map(|v| side[vertex_node(v)]).collect();
    members[forced] = true;
    members
}

/// Exact `d*(G)` for graphs of any order.
pub fn max_one_density_by_flow(g: &Graph) -> Result<Density, PatternError> {
    if g.n() < 2 {
        return Err(PatternError::Parameter(format!("1-density needs at least 2 vertices, graph has {}", g.n())));
    }
    if g.edge_count() == 0 {
        return Ok(Density::from_integer(0));
    }
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let mut lambda = Density::from_integer(1);
    loop {
        let mut improved: Option<Density> = None;
        for forced in 0..g.n() {
            let members = best_set_with(g, &edges, forced, lambda);
            let size = members.iter().filter(|&&m| m).count() as i64;
            let inner = edges.iter().filter(|&&(u, v)| members[u] && members[v]).count() as i64;
            if size >= 2 {
                let density = Density::new(inner, size - 1);
                if density > lambda && improved.is_none_or(|best| density > best) {
                    improved = Some(density);
                }
            }
        }
        match improved {
            Some(better) => lambda = better,
            None => return Ok(lambda),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{complete_pattern, max_one_density, path_power};

    #[test]
    fn agrees_with_enumeration_on_named_patterns() {
        for r in 2..=7 {
            let k = complete_pattern(r);
            assert_eq!(max_one_density_by_flow(&k).unwrap(), max_one_density(&k).unwrap());
        }
        for (q, k) in [(5, 2), (6, 2), (7, 3), (9, 2), (12, 4)] {
            let p = path_power(q, k);
            assert_eq!(max_one_density_by_flow(&p).unwrap(), max_one_density(&p).unwrap());
        }
    }

    #[test]
    fn disjoint_union_keeps_densest_component() {
        let mut g = Graph::empty(9);
        for (u, v) in complete_pattern(4).edges() {
            g.add_edge(u, v);
        }
        for i in 4..8 {
            g.add_edge(i, i + 1);
        }
        assert_eq!(max_one_density_by_flow(&g).unwrap(), Density::from_integer(2));
    }

    #[test]
    fn edgeless_and_tiny_inputs() {
        assert_eq!(max_one_density_by_flow(&Graph::empty(3)).unwrap(), Density::from_integer(0));
        assert!(max_one_density_by_flow(&Graph::empty(1)).is_err());
    }
}
