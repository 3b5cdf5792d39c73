use graph_core::Graph;
use serde::Serialize;

use crate::{density_to_string, Density, PatternError};

/// Largest pattern accepted by the subset-enumeration routines.
pub const MAX_PATTERN_VERTICES: usize = 12;

/// Induced edge counts of every vertex subset, indexed by bitmask.
struct SubsetTable {
    n: usize,
    edges: Vec<u32>,
}

impl SubsetTable {
    fn build(f: &Graph) -> Result<Self, PatternError> {
        let n = f.n();
        if n > MAX_PATTERN_VERTICES {
            return Err(PatternError::Capacity(format!(
                "pattern has {n} vertices; subset enumeration is limited to {MAX_PATTERN_VERTICES}"
            )));
        }
        let masks: Vec<u32> =
            (0..n).map(|u| f.neighbors(u).fold(0u32, |acc, v| acc | 1 << v)).collect();
        let mut edges = vec![0u32; 1 << n];
        for mask in 1usize..(1 << n) {
            let low = mask.trailing_zeros() as usize;
            let rest = mask & (mask - 1);
            edges[mask] = edges[rest] + (masks[low] & rest as u32).count_ones();
        }
        Ok(SubsetTable { n, edges })
    }

    /// `(mask, d(F[mask]))` over all subsets with at least two vertices.
    fn densities(&self) -> impl Iterator<Item = (usize, Density)> + '_ {
        (1usize..(1 << self.n)).filter(|m| m.count_ones() >= 2).map(|m| {
            (m, Density::new(self.edges[m] as i64, m.count_ones() as i64 - 1))
        })
    }
}

fn require_two_vertices(f: &Graph) -> Result<(), PatternError> {
    if f.n() < 2 {
        return Err(PatternError::Parameter(format!("1-density needs at least 2 vertices, pattern has {}", f.n())));
    }
    Ok(())
}

/// `d(F) = e(F) / (v(F) - 1)`.
pub fn one_density(f: &Graph) -> Result<Density, PatternError> {
    require_two_vertices(f)?;
    Ok(Density::new(f.edge_count() as i64, f.n() as i64 - 1))
}

/// `d*(F)`, maximised over induced subsets; an induced subgraph is always at
/// least as dense as any subgraph on the same vertices.
pub fn max_one_density(f: &Graph) -> Result<Density, PatternError> {
    require_two_vertices(f)?;
    let table = SubsetTable::build(f)?;
    Ok(table.densities().map(|(_, d)| d).max().expect("at least one subset of size two"))
}

/// `d*(v, F)`: the maximum 1-density over subgraphs containing `v`.
pub fn max_one_density_containing(f: &Graph, v: usize) -> Result<Density, PatternError> {
    require_two_vertices(f)?;
    if v >= f.n() {
        return Err(PatternError::Parameter(format!("vertex {v} is not in a pattern on {} vertices", f.n())));
    }
    let table = SubsetTable::build(f)?;
    Ok(table.densities().filter(|(m, _)| m >> v & 1 == 1).map(|(_, d)| d).max().expect("v has a partner"))
}

/// Every proper subgraph on at least two vertices is strictly sparser than
/// `F`. Spanning proper subgraphs lose edges, so only proper vertex subsets
/// need checking.
pub fn is_strictly_one_balanced(f: &Graph) -> Result<bool, PatternError> {
    let d = one_density(f)?;
    let table = SubsetTable::build(f)?;
    let all = (1usize << f.n()) - 1;
    let balanced = table.densities().all(|(m, dm)| m == all || dm < d);
    Ok(balanced)
}

/// `d*(v, F) = d*(F)` for every vertex `v`.
pub fn is_vertex_balanced(f: &Graph) -> Result<bool, PatternError> {
    require_two_vertices(f)?;
    let table = SubsetTable::build(f)?;
    let mut best_with = vec![Density::from_integer(0); f.n()];
    for (m, d) in table.densities() {
        for (v, best) in best_with.iter_mut().enumerate() {
            if m >> v & 1 == 1 && d > *best {
                *best = d;
            }
        }
    }
    let overall = *best_with.iter().max().expect("non-empty");
    Ok(best_with.iter().all(|&b| b == overall))
}

/// Density summary of a fixed pattern.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternStats {
    pub pattern: Graph,
    pub one_density: Density,
    pub max_one_density: Density,
    pub strictly_one_balanced: bool,
    pub vertex_balanced: bool,
}

impl PatternStats {
    pub fn compute(pattern: &Graph) -> Result<Self, PatternError> {
        Ok(PatternStats {
            pattern: pattern.clone(),
            one_density: one_density(pattern)?,
            max_one_density: max_one_density(pattern)?,
            strictly_one_balanced: is_strictly_one_balanced(pattern)?,
            vertex_balanced: is_vertex_balanced(pattern)?,
        })
    }

    pub fn vertices(&self) -> usize {
        self.pattern.n()
    }

    pub fn edges(&self) -> usize {
        self.pattern.edge_count()
    }
}

#[derive(Serialize)]
struct PatternStatsRecord {
    vertices: usize,
    edges: usize,
    one_density: String,
    max_one_density: String,
    strictly_one_balanced: bool,
    vertex_balanced: bool,
}

impl Serialize for PatternStats {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        PatternStatsRecord {
            vertices: self.vertices(),
            edges: self.edges(),
            one_density: density_to_string(self.one_density),
            max_one_density: density_to_string(self.max_one_density),
            strictly_one_balanced: self.strictly_one_balanced,
            vertex_balanced: self.vertex_balanced,
        }
        .serialize(serializer)
    }
}
