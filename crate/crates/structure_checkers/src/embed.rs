use std::collections::HashSet;
use std::ops::ControlFlow;

use graph_core::{Graph, VertexSet};

use crate::CheckError;

/// Largest pattern accepted by the backtracking embedder.
pub const MAX_PATTERN_VERTICES: usize = 12;

pub(crate) fn require_pattern(f: &Graph) -> Result<(), CheckError> {
    if f.n() == 0 {
        return Err(CheckError::Parameter("pattern has no vertices".into()));
    }
    if f.n() > MAX_PATTERN_VERTICES {
        return Err(CheckError::Capacity(format!(
            "pattern has {} vertices; embedding search is limited to {MAX_PATTERN_VERTICES}",
            f.n()
        )));
    }
    Ok(())
}

/// Order in which pattern vertices are mapped. Each vertex after the first
/// is, whenever possible, adjacent to an already placed one, so candidate
/// sets come from intersecting host adjacency rows.
struct EmbeddingPlan {
    order: Vec<usize>,
    /// For position `i`, the positions `< i` of pattern neighbours.
    earlier: Vec<Vec<usize>>,
}

impl EmbeddingPlan {
    fn new(f: &Graph, root: Option<usize>) -> Self {
        let n = f.n();
        let mut placed = vec![false; n];
        let mut order = Vec::with_capacity(n);
        if let Some(r) = root {
            placed[r] = true;
            order.push(r);
        }
        while order.len() < n {
            let next = (0..n)
                .filter(|&x| !placed[x])
                .max_by_key(|&x| {
                    let links = order.iter().filter(|&&y| f.has_edge(x, y)).count();
                    (links, f.degree(x), std::cmp::Reverse(x))
                })
                .expect("an unplaced vertex remains");
            placed[next] = true;
            order.push(next);
        }
        let earlier = (0..n)
            .map(|i| (0..i).filter(|&j| f.has_edge(order[i], order[j])).collect())
            .collect();
        EmbeddingPlan { order, earlier }
    }
}

struct Embedder<'a> {
    host: &'a Graph,
    plan: EmbeddingPlan,
    allowed: Option<&'a VertexSet>,
    /// Host image of each position.
    image: Vec<usize>,
    used: Vec<u64>,
    scratch: Vec<Vec<u64>>,
}

impl<'a> Embedder<'a> {
    fn new(host: &'a Graph, pattern: &Graph, root: Option<usize>, allowed: Option<&'a VertexSet>) -> Self {
        let words = host.n().div_ceil(64);
        Embedder {
            host,
            plan: EmbeddingPlan::new(pattern, root),
            allowed,
            image: vec![0; pattern.n()],
            used: vec![0; words],
            scratch: vec![vec![0; words]; pattern.n()],
        }
    }

    fn fill_candidates(&mut self, position: usize) {
        let mut candidates = std::mem::take(&mut self.scratch[position]);
        match self.plan.earlier[position].split_first() {
            Some((&first, rest)) => {
                candidates.copy_from_slice(self.host.row(self.image[first]));
                for &j in rest {
                    for (c, r) in candidates.iter_mut().zip(self.host.row(self.image[j])) {
                        *c &= r;
                    }
                }
            }
            None => {
                let n = self.host.n();
                for (i, c) in candidates.iter_mut().enumerate() {
                    let remaining = n - i * 64;
                    *c = if remaining >= 64 { u64::MAX } else { (1u64 << remaining) - 1 };
                }
            }
        }
        if let Some(allowed) = self.allowed {
            for (c, a) in candidates.iter_mut().zip(allowed.words()) {
                *c &= a;
            }
        }
        for (c, u) in candidates.iter_mut().zip(&self.used) {
            *c &= !u;
        }
        self.scratch[position] = candidates;
    }

    /// Visits every embedding with positions `>= position` still free.
    /// The visitor receives host images indexed by pattern vertex.
    fn extend<V>(&mut self, position: usize, by_vertex: &mut Vec<usize>, visit: &mut V) -> ControlFlow<()>
    where
        V: FnMut(&[usize]) -> ControlFlow<()>,
    {
        if position == self.plan.order.len() {
            for (i, &x) in self.plan.order.iter().enumerate() {
                by_vertex[x] = self.image[i];
            }
            return visit(by_vertex);
        }
        self.fill_candidates(position);
        for w in 0..self.scratch[position].len() {
            let mut bits = self.scratch[position][w];
            while bits != 0 {
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                let v = w * 64 + b;
                self.image[position] = v;
                self.used[w] |= 1 << b;
                let flow = self.extend(position + 1, by_vertex, visit);
                self.used[w] &= !(1 << b);
                flow?;
            }
        }
        ControlFlow::Continue(())
    }

    /// Embeddings whose root (the first planned vertex) is sent to `v`.
    fn run_rooted<V>(&mut self, v: usize, visit: &mut V) -> ControlFlow<()>
    where
        V: FnMut(&[usize]) -> ControlFlow<()>,
    {
        if self.allowed.is_some_and(|a| !a.contains(v)) {
            return ControlFlow::Continue(());
        }
        let mut by_vertex = vec![0; self.plan.order.len()];
        self.image[0] = v;
        self.used[v / 64] |= 1 << (v % 64);
        let flow = self.extend(1, &mut by_vertex, visit);
        self.used[v / 64] &= !(1 << (v % 64));
        flow
    }

    fn run<V>(&mut self, visit: &mut V) -> ControlFlow<()>
    where
        V: FnMut(&[usize]) -> ControlFlow<()>,
    {
        let mut by_vertex = vec![0; self.plan.order.len()];
        self.extend(0, &mut by_vertex, visit)
    }
}

/// Number of injective maps `V(F) -> V(G)` sending edges to edges.
pub fn count_embeddings(host: &Graph, pattern: &Graph) -> Result<u64, CheckError> {
    require_pattern(pattern)?;
    let mut count = 0u64;
    let _ = Embedder::new(host, pattern, None, None).run(&mut |_| {
        count += 1;
        ControlFlow::Continue(())
    });
    Ok(count)
}

/// `|Aut(F)|`.
pub fn automorphism_count(pattern: &Graph) -> Result<u64, CheckError> {
    count_embeddings(pattern, pattern)
}

/// Number of (unlabelled) copies of `F` in `G`: embeddings divided by `|Aut(F)|`.
pub fn count_copies(host: &Graph, pattern: &Graph) -> Result<u64, CheckError> {
    Ok(count_embeddings(host, pattern)? / automorphism_count(pattern)?)
}

/// Number of copies of `F` in `G` that contain `v`.
///
/// Every copy through `v` is the image of exactly `|Aut(F)|` embeddings, and
/// each of those sends exactly one pattern vertex to `v`, so summing rooted
/// embedding counts over all pattern vertices and dividing is exact.
pub fn count_copies_at(host: &Graph, pattern: &Graph, v: usize) -> Result<u64, CheckError> {
    require_pattern(pattern)?;
    if v >= host.n() {
        return Err(CheckError::Parameter(format!("vertex {v} is not in a graph on {} vertices", host.n())));
    }
    let mut rooted = 0u64;
    for x in 0..pattern.n() {
        let _ = Embedder::new(host, pattern, Some(x), None).run_rooted(v, &mut |_| {
            rooted += 1;
            ControlFlow::Continue(())
        });
    }
    Ok(rooted / automorphism_count(pattern)?)
}

/// One copy per vertex set: `vertices` is sorted and `assignment[x]` is the
/// host image of pattern vertex `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct CopySite {
    pub vertices: Vec<usize>,
    pub assignment: Vec<usize>,
}

/// Every vertex set inside `allowed` that spans a copy of `F`, each with one
/// witnessing assignment. Fails once more than `limit` sets are found.
pub(crate) fn enumerate_copy_sites(
    host: &Graph,
    pattern: &Graph,
    allowed: Option<&VertexSet>,
    limit: usize,
) -> Result<Vec<CopySite>, CheckError> {
    require_pattern(pattern)?;
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut sites = Vec::new();
    let flow = Embedder::new(host, pattern, None, allowed).run(&mut |assignment| {
        let mut vertices = assignment.to_vec();
        vertices.sort_unstable();
        if seen.insert(vertices.clone()) {
            if sites.len() == limit {
                return ControlFlow::Break(());
            }
            sites.push(CopySite { vertices, assignment: assignment.to_vec() });
        }
        ControlFlow::Continue(())
    });
    if flow.is_break() {
        return Err(CheckError::Capacity(format!("more than {limit} vertex sets span a copy of the pattern")));
    }
    Ok(sites)
}

/// Whether `assignment` maps every edge of `F` onto an edge of `G` injectively.
pub fn is_embedding(host: &Graph, pattern: &Graph, assignment: &[usize]) -> bool {
    if assignment.len() != pattern.n() || assignment.iter().any(|&v| v >= host.n()) {
        return false;
    }
    let mut image = assignment.to_vec();
    image.sort_unstable();
    if image.windows(2).any(|w| w[0] == w[1]) {
        return false;
    }
    pattern.edges().all(|(x, y)| host.has_edge(assignment[x], assignment[y]))
}
