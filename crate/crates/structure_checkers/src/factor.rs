use std::collections::{HashMap, HashSet};

use graph_core::{Graph, VertexSet};
use serde::{Deserialize, Serialize};

use crate::components::components_within;
use crate::embed::{enumerate_copy_sites, is_embedding, require_pattern, CopySite};
use crate::CheckError;

/// Vertex-disjoint copies of a pattern. `copies[i][x]` is the host vertex
/// playing pattern vertex `x` in copy `i`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FactorWitness {
    pub copies: Vec<Vec<usize>>,
}

impl FactorWitness {
    pub fn len(&self) -> usize {
        self.copies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.copies.is_empty()
    }

    pub fn covered_vertices(&self) -> usize {
        self.copies.iter().map(Vec::len).sum()
    }

    /// Checks disjointness and that every tuple embeds `F` into `G`.
    pub fn validate(&self, host: &Graph, pattern: &Graph) -> Result<(), String> {
        let mut used = VertexSet::new(host.n());
        for (i, tuple) in self.copies.iter().enumerate() {
            if !is_embedding(host, pattern, tuple) {
                return Err(format!("copy {i} {tuple:?} does not embed the pattern"));
            }
            for &v in tuple {
                if !used.insert(v) {
                    return Err(format!("vertex {v} is used by two copies"));
                }
            }
        }
        Ok(())
    }

    /// Whether the copies cover every vertex of a graph on `n` vertices.
    pub fn is_spanning(&self, n: usize) -> bool {
        self.covered_vertices() == n
    }
}

/// Bounds on the exact searches. Exceeding any of them yields
/// [`CheckError::Capacity`], never a negative answer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchLimits {
    /// Largest connected component (whole graph for disconnected patterns)
    /// searched exactly; `None` picks [`default_vertex_cap`].
    pub max_vertices: Option<usize>,
    pub node_budget: u64,
    pub max_copy_sites: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { max_vertices: None, node_budget: 20_000_000, max_copy_sites: 5_000_000 }
    }
}

/// Exact-search vertex cap: 600 for patterns with at most three edges,
/// smaller for denser ones.
pub fn default_vertex_cap(pattern: &Graph) -> usize {
    match pattern.edge_count() {
        0..=3 => 600,
        4..=10 => 300,
        _ => 150,
    }
}

#[derive(Clone, Copy)]
enum Move {
    Take { site: usize, mark: usize },
    Discard { vertex: usize, mark: usize },
}

struct BudgetExceeded;

/// Incremental state shared by the exact cover and the packing search. A
/// site is alive iff all of its vertices are still open.
struct PackingSearch<'a> {
    host: &'a Graph,
    pattern_size: usize,
    split_components: bool,
    sites: Vec<CopySite>,
    incident: Vec<Vec<usize>>,
    alive_count: Vec<usize>,
    dead: Vec<bool>,
    open: VertexSet,
    trail: Vec<usize>,
    moves: Vec<Move>,
    nodes: u64,
    node_budget: u64,
}

impl<'a> PackingSearch<'a> {
    fn new(host: &'a Graph, pattern: &Graph, sites: Vec<CopySite>, node_budget: u64) -> Self {
        let n = host.n();
        let mut incident = vec![Vec::new(); n];
        for (i, site) in sites.iter().enumerate() {
            for &v in &site.vertices {
                incident[v].push(i);
            }
        }
        let alive_count = incident.iter().map(Vec::len).collect();
        PackingSearch {
            host,
            pattern_size: pattern.n(),
            split_components: is_connected_pattern(pattern),
            dead: vec![false; sites.len()],
            sites,
            incident,
            alive_count,
            open: VertexSet::full(n),
            trail: Vec::new(),
            moves: Vec::new(),
            nodes: 0,
            node_budget,
        }
    }

    fn tick(&mut self) -> Result<(), BudgetExceeded> {
        self.nodes += 1;
        if self.nodes > self.node_budget {
            Err(BudgetExceeded)
        } else {
            Ok(())
        }
    }

    fn close_vertex(&mut self, v: usize) {
        self.open.remove(v);
        for k in 0..self.incident[v].len() {
            let s = self.incident[v][k];
            if !self.dead[s] {
                self.dead[s] = true;
                self.trail.push(s);
                for &w in &self.sites[s].vertices {
                    self.alive_count[w] -= 1;
                }
            }
        }
    }

    fn take(&mut self, site: usize) {
        let mark = self.trail.len();
        for k in 0..self.sites[site].vertices.len() {
            let v = self.sites[site].vertices[k];
            self.close_vertex(v);
        }
        self.moves.push(Move::Take { site, mark });
    }

    fn discard(&mut self, vertex: usize) {
        let mark = self.trail.len();
        self.close_vertex(vertex);
        self.moves.push(Move::Discard { vertex, mark });
    }

    fn undo_to(&mut self, depth: usize) {
        while self.moves.len() > depth {
            let (mark, reopened): (usize, Vec<usize>) = match self.moves.pop().expect("depth below stack") {
                Move::Take { site, mark } => (mark, self.sites[site].vertices.clone()),
                Move::Discard { vertex, mark } => (mark, vec![vertex]),
            };
            while self.trail.len() > mark {
                let s = self.trail.pop().expect("trail above mark");
                self.dead[s] = false;
                for &w in &self.sites[s].vertices {
                    self.alive_count[w] += 1;
                }
            }
            for v in reopened {
                self.open.insert(v);
            }
        }
    }

    fn taken_witness(&self) -> FactorWitness {
        let copies = self
            .moves
            .iter()
            .filter_map(|m| match *m {
                Move::Take { site, .. } => Some(self.sites[site].assignment.clone()),
                Move::Discard { .. } => None,
            })
            .collect();
        FactorWitness { copies }
    }

    fn split(&self, region: &VertexSet) -> Vec<VertexSet> {
        if self.split_components {
            let mut parts = components_within(self.host, region);
            parts.sort_by_key(VertexSet::len);
            parts
        } else {
            vec![region.clone()]
        }
    }

    /// Open vertex of `region` with the fewest alive sites.
    fn most_constrained(&self, region: &VertexSet) -> Option<usize> {
        region.iter().min_by_key(|&v| self.alive_count[v])
    }

    fn alive_sites_at(&self, v: usize) -> Vec<usize> {
        let mut sites: Vec<usize> = self.incident[v].iter().copied().filter(|&s| !self.dead[s]).collect();
        // Sites whose vertices are least contested first.
        sites.sort_by_key(|&s| self.sites[s].vertices.iter().map(|&w| self.alive_count[w]).sum::<usize>());
        sites
    }

    // ---- exact cover ----

    fn cover_region(&mut self, region: &VertexSet, failed: &mut HashSet<VertexSet>) -> Result<bool, BudgetExceeded> {
        let parts = self.split(region);
        if self.split_components && parts.iter().any(|p| p.len() % self.pattern_size != 0) {
            return Ok(false);
        }
        let depth = self.moves.len();
        for part in parts {
            if !self.cover_component(&part, failed)? {
                self.undo_to(depth);
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn cover_component(&mut self, part: &VertexSet, failed: &mut HashSet<VertexSet>) -> Result<bool, BudgetExceeded> {
        self.tick()?;
        let Some(v) = self.most_constrained(part) else { return Ok(true) };
        if self.alive_count[v] == 0 || failed.contains(part) {
            return Ok(false);
        }
        let depth = self.moves.len();
        for site in self.alive_sites_at(v) {
            self.take(site);
            let mut rest = part.clone();
            for &w in &self.sites[site].vertices {
                rest.remove(w);
            }
            if self.cover_region(&rest, failed)? {
                return Ok(true);
            }
            self.undo_to(depth);
        }
        if failed.len() < 1_000_000 {
            failed.insert(part.clone());
        }
        Ok(false)
    }

    // ---- maximum packing ----

    /// Vertices of `region` still lying in some alive site.
    fn coverable(&self, region: &VertexSet) -> VertexSet {
        let mut live = region.clone();
        for v in region.iter() {
            if self.alive_count[v] == 0 {
                live.remove(v);
            }
        }
        live
    }

    fn upper_bound(&self, region: &VertexSet) -> usize {
        self.coverable(region).len() / self.pattern_size
    }

    /// Greedy packing inside `region`; leaves the chosen sites taken.
    fn greedy(&mut self, region: &VertexSet) -> usize {
        let mut taken = 0;
        let mut live = self.coverable(region);
        loop {
            let next = live.iter().filter(|&v| self.alive_count[v] > 0).min_by_key(|&v| self.alive_count[v]);
            let Some(v) = next else { break };
            let site = self.alive_sites_at(v)[0];
            self.take(site);
            taken += 1;
            for &w in &self.sites[site].vertices {
                live.remove(w);
            }
        }
        taken
    }

    /// Exact maximum number of disjoint sites inside `region`, together with
    /// the chosen site indices. State is restored on return.
    fn maximum_in_region(
        &mut self,
        region: &VertexSet,
        memo: &mut HashMap<VertexSet, Vec<usize>>,
    ) -> Result<Vec<usize>, BudgetExceeded> {
        let live = self.coverable(region);
        let mut chosen = Vec::new();
        for part in self.split(&live) {
            chosen.extend(self.maximum_in_component(&part, memo)?);
        }
        Ok(chosen)
    }

    fn maximum_in_component(
        &mut self,
        part: &VertexSet,
        memo: &mut HashMap<VertexSet, Vec<usize>>,
    ) -> Result<Vec<usize>, BudgetExceeded> {
        self.tick()?;
        if let Some(known) = memo.get(part) {
            return Ok(known.clone());
        }
        let bound = self.upper_bound(part);
        let mut best: Vec<usize> = Vec::new();
        if bound > 0 {
            let v = self
                .most_constrained(&self.coverable(part))
                .expect("a positive bound leaves a coverable vertex");
            let depth = self.moves.len();
            for site in self.alive_sites_at(v) {
                self.take(site);
                let mut rest = part.clone();
                for &w in &self.sites[site].vertices {
                    rest.remove(w);
                }
                if 1 + self.upper_bound(&rest) > best.len() {
                    let mut candidate = vec![site];
                    candidate.extend(self.maximum_in_region(&rest, memo)?);
                    if candidate.len() > best.len() {
                        best = candidate;
                    }
                }
                self.undo_to(depth);
                if best.len() == bound {
                    break;
                }
            }
            if best.len() < bound {
                self.discard(v);
                let mut rest = part.clone();
                rest.remove(v);
                if self.upper_bound(&rest) > best.len() {
                    let candidate = self.maximum_in_region(&rest, memo)?;
                    if candidate.len() > best.len() {
                        best = candidate;
                    }
                }
                self.undo_to(depth);
            }
        }
        if memo.len() < 1_000_000 {
            memo.insert(part.clone(), best.clone());
        }
        Ok(best)
    }
}

fn is_connected_pattern(pattern: &Graph) -> bool {
    crate::components::is_connected(pattern)
}

fn check_component_cap(host: &Graph, pattern: &Graph, limits: &SearchLimits) -> Result<(), CheckError> {
    let cap = limits.max_vertices.unwrap_or_else(|| default_vertex_cap(pattern));
    let largest = if is_connected_pattern(pattern) {
        components_within(host, &VertexSet::full(host.n())).iter().map(VertexSet::len).max().unwrap_or(0)
    } else {
        host.n()
    };
    if largest > cap {
        return Err(CheckError::Capacity(format!(
            "exact search limited to {cap} vertices per component, found {largest}"
        )));
    }
    Ok(())
}

fn budget_error(limits: &SearchLimits) -> CheckError {
    CheckError::Capacity(format!("search exceeded {} nodes", limits.node_budget))
}

/// An `F`-factor of `G`, or `None` when none exists.
pub fn has_f_factor(host: &Graph, pattern: &Graph) -> Result<Option<FactorWitness>, CheckError> {
    has_f_factor_with(host, pattern, &SearchLimits::default())
}

/// Exact cover of `V(G)` by vertex sets spanning copies of `F`, branching on
/// the open vertex with the fewest remaining copies. For connected `F` the
/// open vertices are split into connected components which are solved
/// independently and must each have size divisible by `v(F)`.
pub fn has_f_factor_with(
    host: &Graph,
    pattern: &Graph,
    limits: &SearchLimits,
) -> Result<Option<FactorWitness>, CheckError> {
    require_pattern(pattern)?;
    if host.n() % pattern.n() != 0 {
        return Err(CheckError::Parameter(format!(
            "v(F) = {} does not divide n = {}",
            pattern.n(),
            host.n()
        )));
    }
    check_component_cap(host, pattern, limits)?;
    let sites = enumerate_copy_sites(host, pattern, None, limits.max_copy_sites)?;
    let mut search = PackingSearch::new(host, pattern, sites, limits.node_budget);
    let everything = VertexSet::full(host.n());
    let mut failed = HashSet::new();
    match search.cover_region(&everything, &mut failed) {
        Ok(true) => Ok(Some(search.taken_witness())),
        Ok(false) => Ok(None),
        Err(BudgetExceeded) => Err(budget_error(limits)),
    }
}

/// Disjoint copies of `F` in `G`. Returns as soon as `target` copies are
/// known (the count is then at least `target`); otherwise the count is the
/// exact maximum.
pub fn max_disjoint_copies(host: &Graph, pattern: &Graph, target: usize) -> Result<(usize, FactorWitness), CheckError> {
    max_disjoint_copies_with(host, pattern, target, &SearchLimits::default())
}

pub fn max_disjoint_copies_with(
    host: &Graph,
    pattern: &Graph,
    target: usize,
    limits: &SearchLimits,
) -> Result<(usize, FactorWitness), CheckError> {
    require_pattern(pattern)?;
    let sites = enumerate_copy_sites(host, pattern, None, limits.max_copy_sites)?;
    let mut search = PackingSearch::new(host, pattern, sites, limits.node_budget);
    let everything = VertexSet::full(host.n());

    let greedy_count = search.greedy(&everything);
    let greedy_witness = search.taken_witness();
    search.undo_to(0);
    if greedy_count >= target || greedy_count == search.upper_bound(&everything) {
        return Ok((greedy_count, greedy_witness));
    }
    check_component_cap(host, pattern, limits)?;

    // Solve components exactly one at a time, stopping once the exact part
    // plus a greedy packing of the rest reaches the target.
    let live = search.coverable(&everything);
    let parts = search.split(&live);
    let mut memo = HashMap::new();
    let mut exact: Vec<usize> = Vec::new();
    for (i, part) in parts.iter().enumerate() {
        let best = search.maximum_in_component(part, &mut memo).map_err(|_| {
            CheckError::Capacity(format!(
                "search exceeded {} nodes with {} of {target} copies found",
                limits.node_budget, greedy_count
            ))
        })?;
        exact.extend(best);
        for &s in &exact {
            search.take(s);
        }
        let mut rest = VertexSet::new(host.n());
        for p in &parts[i + 1..] {
            rest.union_with(p);
        }
        let extra = search.greedy(&rest);
        let witness = search.taken_witness();
        search.undo_to(0);
        if exact.len() + extra >= target {
            return Ok((exact.len() + extra, witness));
        }
    }
    for &s in &exact {
        search.take(s);
    }
    Ok((exact.len(), search.taken_witness()))
}
