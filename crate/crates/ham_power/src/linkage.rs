use graph_core::{Graph, VertexSet};
use serde::{Deserialize, Serialize};

use crate::absorber::path_power_edges;
use crate::HamError;

/// Two disjoint ordered `k`-tuples. A linkage for the pair is the `k`-th
/// power of the path `a · internal · b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EndsequencePair {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
}

impl EndsequencePair {
    pub fn new(a: Vec<usize>, b: Vec<usize>) -> Self {
        EndsequencePair { a, b }
    }

    pub fn k(&self) -> usize {
        self.a.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.a.iter().chain(&self.b).copied()
    }

    fn validate(&self, n: usize) -> Result<(), HamError> {
        let mut all: Vec<usize> = self.vertices().collect();
        all.sort_unstable();
        if self.a.len() != self.b.len() || self.a.is_empty() {
            return Err(HamError::Parameter("endsequences must be non-empty and of equal length".into()));
        }
        if all.windows(2).any(|w| w[0] == w[1]) || all.last().is_some_and(|&v| v >= n) {
            return Err(HamError::Parameter(format!("endsequence pair {self:?} is not 2k distinct vertices")));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Linkage {
    pub pair: EndsequencePair,
    pub internal: Vec<usize>,
}

impl Linkage {
    /// `a · internal · b`.
    pub fn sequence(&self) -> Vec<usize> {
        let mut seq = self.pair.a.clone();
        seq.extend(&self.internal);
        seq.extend(&self.pair.b);
        seq
    }

    /// The path power minus all edges spanned by `a` and all spanned by `b`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let inside = |x: usize, y: usize, set: &[usize]| set.contains(&x) && set.contains(&y);
        path_power_edges(&self.sequence(), self.pair.k())
            .into_iter()
            .filter(|&(x, y)| !inside(x, y, &self.pair.a) && !inside(x, y, &self.pair.b))
            .collect()
    }

    /// Length `r`, internal vertices distinct, inside `allowed`, disjoint
    /// from the pair, and every linkage edge present in `host`.
    pub fn verify(&self, host: &Graph, r: usize, allowed: &VertexSet) -> Result<(), String> {
        if self.internal.len() != r {
            return Err(format!("linkage has {} internal vertices, expected {r}", self.internal.len()));
        }
        let mut seq = self.sequence();
        seq.sort_unstable();
        if seq.windows(2).any(|w| w[0] == w[1]) {
            return Err("linkage vertices are not distinct".into());
        }
        if let Some(&x) = self.internal.iter().find(|&&x| !allowed.contains(x)) {
            return Err(format!("internal vertex {x} lies outside the allowed set"));
        }
        if let Some((x, y)) = self.edges().into_iter().find(|&(x, y)| !host.has_edge(x, y)) {
            return Err(format!("linkage edge ({x}, {y}) is missing"));
        }
        Ok(())
    }
}

/// Outcome of a bounded search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome<T> {
    Found(T),
    /// The search space was exhausted.
    Absent,
    /// A heuristic search stopped without exhausting the space.
    GaveUp,
    BudgetExceeded,
}

impl<T> SearchOutcome<T> {
    pub fn found(self) -> Option<T> {
        match self {
            SearchOutcome::Found(x) => Some(x),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            SearchOutcome::Found(_) => "found",
            SearchOutcome::Absent => "absent",
            SearchOutcome::GaveUp => "heuristic search gave up",
            SearchOutcome::BudgetExceeded => "search budget exceeded",
        }
    }
}

/// Default node-expansion budget for one linkage family.
pub const DEFAULT_LINKAGE_BUDGET: u64 = 1_000_000;

struct FamilySearch<'a> {
    host: &'a Graph,
    pairs: &'a [EndsequencePair],
    r: usize,
    k: usize,
    allowed: &'a VertexSet,
    used: VertexSet,
    internals: Vec<Vec<usize>>,
    budget: u64,
    exhausted: bool,
}

impl FamilySearch<'_> {
    /// Whether pair `i` has every edge between its `a` and `b` tuples that
    /// a linkage of length `r` needs.
    fn fixed_edges_present(&self, i: usize) -> bool {
        let pair = &self.pairs[i];
        let k = self.k;
        (0..k).all(|x| {
            (0..k).all(|y| {
                let distance = (k - x) + self.r + y;
                distance > k || self.host.has_edge(pair.a[x], pair.b[y])
            })
        })
    }

    fn candidates(&self, i: usize, position: usize) -> VertexSet {
        let pair = &self.pairs[i];
        let k = self.k;
        let mut set = self.allowed.clone();
        set.subtract(&self.used);
        // Sequence index of this internal vertex is k + position.
        let index = k + position;
        for d in 1..=k {
            let prev = index - d;
            let vertex = if prev < k { pair.a[prev] } else { self.internals[i][prev - k] };
            set.intersect_words(self.host.row(vertex));
        }
        for (m, &b) in pair.b.iter().enumerate() {
            let b_index = k + self.r + m;
            if b_index - index <= k {
                set.intersect_words(self.host.row(b));
            }
        }
        set
    }

    fn extend(&mut self, i: usize, position: usize) -> bool {
        if self.budget == 0 {
            self.exhausted = true;
            return false;
        }
        self.budget -= 1;
        if i == self.pairs.len() {
            return true;
        }
        if position == 0 && !self.fixed_edges_present(i) {
            return false;
        }
        if position == self.r {
            return self.extend(i + 1, 0);
        }
        let candidates = self.candidates(i, position);
        for x in candidates.iter() {
            self.used.insert(x);
            self.internals[i].push(x);
            if self.extend(i, position + 1) {
                return true;
            }
            self.internals[i].pop();
            self.used.remove(x);
            if self.exhausted {
                return false;
            }
        }
        false
    }
}

fn check_family(host: &Graph, family: &[EndsequencePair], allowed: &VertexSet) -> Result<usize, HamError> {
    let k = family.first().map_or(0, EndsequencePair::k);
    let mut seen = VertexSet::new(host.n());
    for pair in family {
        pair.validate(host.n())?;
        if pair.k() != k {
            return Err(HamError::Parameter("all pairs of a family must have the same k".into()));
        }
        for v in pair.vertices() {
            if allowed.contains(v) {
                return Err(HamError::Parameter(format!("endsequence vertex {v} lies in the allowed set")));
            }
            if !seen.insert(v) {
                return Err(HamError::Parameter(format!("endsequence pairs share vertex {v}")));
            }
        }
    }
    Ok(k)
}

/// One linkage of length `r` with internal vertices in `allowed`, found by
/// backtracking over internal vertices in path order.
pub fn find_linkage(
    host: &Graph,
    pair: &EndsequencePair,
    r: usize,
    allowed: &VertexSet,
    budget: u64,
) -> Result<SearchOutcome<Linkage>, HamError> {
    Ok(match find_linkage_family(host, std::slice::from_ref(pair), r, allowed, budget)? {
        SearchOutcome::Found(mut ls) => SearchOutcome::Found(ls.pop().expect("one pair, one linkage")),
        SearchOutcome::Absent => SearchOutcome::Absent,
        SearchOutcome::GaveUp => SearchOutcome::GaveUp,
        SearchOutcome::BudgetExceeded => SearchOutcome::BudgetExceeded,
    })
}

/// Pairwise vertex-disjoint linkages, one per pair, all of length `r` with
/// internal vertices in `allowed`. Pairs are handled in order and the
/// search backtracks across pairs.
pub fn find_linkage_family(
    host: &Graph,
    family: &[EndsequencePair],
    r: usize,
    allowed: &VertexSet,
    budget: u64,
) -> Result<SearchOutcome<Vec<Linkage>>, HamError> {
    let k = check_family(host, family, allowed)?;
    if family.is_empty() {
        return Ok(SearchOutcome::Found(Vec::new()));
    }
    if r * family.len() > allowed.len() {
        return Ok(SearchOutcome::Absent);
    }
    let mut search = FamilySearch {
        host,
        pairs: family,
        r,
        k,
        allowed,
        used: VertexSet::new(host.n()),
        internals: vec![Vec::with_capacity(r); family.len()],
        budget,
        exhausted: false,
    };
    if search.extend(0, 0) {
        let linkages = family
            .iter()
            .zip(search.internals)
            .map(|(pair, internal)| Linkage { pair: pair.clone(), internal })
            .collect();
        Ok(SearchOutcome::Found(linkages))
    } else if search.exhausted {
        Ok(SearchOutcome::BudgetExceeded)
    } else {
        Ok(SearchOutcome::Absent)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all(n: usize, vs: impl IntoIterator<Item = usize>) -> VertexSet {
        VertexSet::from_iter_with_capacity(n, vs)
    }

    #[test]
    fn edge_set_excludes_endsequence_interiors() {
        let l = Linkage { pair: EndsequencePair::new(vec![0, 1], vec![4, 5]), internal: vec![2, 3] };
        let edges = l.edges();
        assert!(!edges.contains(&(0, 1)) && !edges.contains(&(4, 5)));
        // Path power on 6 vertices has 9 edges; two are removed.
        assert_eq!(edges.len(), 7);
    }

    #[test]
    fn single_vertex_bridge_for_k_one() {
        let pair = EndsequencePair::new(vec![0], vec![1]);
        let host = Graph::from_edges(4, [(0, 3), (3, 1)]).unwrap();
        let found = find_linkage(&host, &pair, 1, &all(4, [2, 3]), 1000).unwrap().found().unwrap();
        assert_eq!(found.internal, vec![3]);
        let host = Graph::from_edges(4, [(0, 3), (2, 1)]).unwrap();
        assert_eq!(find_linkage(&host, &pair, 1, &all(4, [2, 3]), 1000).unwrap(), SearchOutcome::Absent);
    }

    #[test]
    fn complete_and_empty_hosts() {
        let pair = EndsequencePair::new(vec![0, 1], vec![2, 3]);
        let allowed = all(10, 4..10);
        let l = find_linkage(&Graph::complete(10), &pair, 4, &allowed, 1000).unwrap().found().unwrap();
        l.verify(&Graph::complete(10), 4, &allowed).unwrap();
        assert_eq!(find_linkage(&Graph::empty(10), &pair, 1, &allowed, 1000).unwrap(), SearchOutcome::Absent);
    }

    #[test]
    fn two_pairs_in_exactly_enough_room() {
        let r = 3;
        let family = vec![EndsequencePair::new(vec![0, 1], vec![2, 3]), EndsequencePair::new(vec![4, 5], vec![6, 7])];
        let allowed = all(14, 8..14);
        let ls = find_linkage_family(&Graph::complete(14), &family, r, &allowed, 10_000).unwrap().found().unwrap();
        assert_eq!(ls.len(), 2);
        let mut inner: Vec<usize> = ls.iter().flat_map(|l| l.internal.clone()).collect();
        inner.sort_unstable();
        assert_eq!(inner, (8..14).collect::<Vec<_>>());
    }

    #[test]
    fn zero_length_linkage_needs_cross_edges() {
        let pair = EndsequencePair::new(vec![0, 1], vec![2, 3]);
        let mut host = Graph::from_edges(4, [(0, 2), (1, 2), (1, 3)]).unwrap();
        let empty = VertexSet::new(4);
        assert!(find_linkage(&host, &pair, 0, &empty, 10).unwrap().found().is_some());
        host.remove_edge(1, 3);
        assert_eq!(find_linkage(&host, &pair, 0, &empty, 10).unwrap(), SearchOutcome::Absent);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let pair = EndsequencePair::new(vec![0, 1], vec![2, 3]);
        let mut host = Graph::complete(30);
        for v in 4..30 {
            host.remove_edge(3, v);
        }
        let allowed = all(30, 4..30);
        assert_eq!(find_linkage(&host, &pair, 3, &allowed, 50).unwrap(), SearchOutcome::BudgetExceeded);
    }

    #[test]
    fn malformed_families_are_rejected() {
        let allowed = all(10, 4..10);
        let overlapping = vec![EndsequencePair::new(vec![0, 1], vec![2, 3]), EndsequencePair::new(vec![3, 4], vec![5, 6])];
        assert!(find_linkage_family(&Graph::complete(10), &overlapping, 1, &allowed, 10).is_err());
        let inside = EndsequencePair::new(vec![0, 1], vec![2, 5]);
        assert!(find_linkage(&Graph::complete(10), &inside, 1, &allowed, 10).is_err());
    }
}
