use graph_core::{complete_edge_count, edge_from_index, Graph};
use num_rational::Rational64;
use pattern_tools::{complete_pattern, Density};
use structure_checkers::{count_copies, has_f_factor, is_connected, min_degree};

use crate::CouplingError;

/// Largest vertex count accepted by the exhaustive routines (`2^6` graphs).
const MAX_VERTICES: usize = 4;

/// A named graph predicate.
#[derive(Clone, Copy)]
pub struct Predicate {
    pub name: &'static str,
    pub eval: fn(&Graph) -> bool,
}

impl std::fmt::Debug for Predicate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name)
    }
}

/// Exact expectations under `G(n, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FkgReport {
    pub e_fg: Rational64,
    pub e_f: Rational64,
    pub e_g: Rational64,
    /// `E[fg] >= E[f] E[g]`.
    pub holds: bool,
}

/// The graph on `n` vertices whose edge set is the bitmask `mask` over edge
/// indices.
fn graph_of(n: usize, mask: u32) -> Graph {
    let edges = (0..complete_edge_count(n)).filter(|i| mask >> i & 1 == 1).map(edge_from_index);
    Graph::from_edges(n, edges).expect("edge indices below M are valid")
}

fn check_size(n: usize) -> Result<(), CouplingError> {
    if n > MAX_VERTICES {
        Err(CouplingError::Parameter(format!("exhaustive checks need n <= {MAX_VERTICES}, got {n}")))
    } else {
        Ok(())
    }
}

/// Whether adding any single edge to any graph on `n` vertices preserves `f`.
pub fn is_increasing(n: usize, f: &dyn Fn(&Graph) -> bool) -> Result<bool, CouplingError> {
    check_size(n)?;
    let m = complete_edge_count(n);
    let values: Vec<bool> = (0..1u32 << m).map(|mask| f(&graph_of(n, mask))).collect();
    Ok((0..1u32 << m).all(|mask| !values[mask as usize] || (0..m).all(|e| values[(mask | 1 << e) as usize])))
}

/// Exact `E[f g]`, `E[f]`, `E[g]` over `G(n, p)` by summing over all graphs.
pub fn check_fkg_exact(
    n: usize,
    p: Density,
    f: &dyn Fn(&Graph) -> bool,
    g: &dyn Fn(&Graph) -> bool,
) -> Result<FkgReport, CouplingError> {
    check_size(n)?;
    let zero = Rational64::from_integer(0);
    let one = Rational64::from_integer(1);
    if p < zero || p > one {
        return Err(CouplingError::Parameter(format!("p = {p} lies outside [0, 1]")));
    }
    if !is_increasing(n, f)? || !is_increasing(n, g)? {
        return Err(CouplingError::Parameter("both predicates must be increasing".into()));
    }
    let m = complete_edge_count(n);
    let (mut e_fg, mut e_f, mut e_g) = (zero, zero, zero);
    for mask in 0..1u32 << m {
        let edges = mask.count_ones() as i32;
        let weight = p.pow(edges) * (one - p).pow(m as i32 - edges);
        let graph = graph_of(n, mask);
        let (fv, gv) = (f(&graph), g(&graph));
        if fv {
            e_f += weight;
        }
        if gv {
            e_g += weight;
        }
        if fv && gv {
            e_fg += weight;
        }
    }
    Ok(FkgReport { e_fg, e_f, e_g, holds: e_fg >= e_f * e_g })
}

fn has_edge(g: &Graph) -> bool {
    g.edge_count() >= 1
}

fn has_triangle(g: &Graph) -> bool {
    g.n() >= 3 && count_copies(g, &complete_pattern(3)).expect("triangle counting on tiny graphs") > 0
}

fn no_isolated_vertex(g: &Graph) -> bool {
    min_degree(g) >= 1
}

fn connected(g: &Graph) -> bool {
    is_connected(g)
}

fn has_perfect_matching(g: &Graph) -> bool {
    g.n() % 2 == 0 && has_f_factor(g, &complete_pattern(2)).expect("matching check on tiny graphs").is_some()
}

fn has_cherry(g: &Graph) -> bool {
    (0..g.n()).any(|v| g.degree(v) >= 2)
}

fn at_least_three_edges(g: &Graph) -> bool {
    g.edge_count() >= 3
}

fn has_star_of_three(g: &Graph) -> bool {
    (0..g.n()).any(|v| g.degree(v) >= 3)
}

fn has_cycle(g: &Graph) -> bool {
    let components = structure_checkers::connected_components(g).len();
    g.edge_count() + components > g.n()
}

fn always(_: &Graph) -> bool {
    true
}

/// Increasing predicates used by the catalogued FKG checks.
pub fn increasing_catalogue() -> Vec<Predicate> {
    vec![
        Predicate { name: "has_edge", eval: has_edge },
        Predicate { name: "has_triangle", eval: has_triangle },
        Predicate { name: "min_degree_ge_1", eval: no_isolated_vertex },
        Predicate { name: "connected", eval: connected },
        Predicate { name: "perfect_matching", eval: has_perfect_matching },
        Predicate { name: "has_cherry", eval: has_cherry },
        Predicate { name: "at_least_3_edges", eval: at_least_three_edges },
        Predicate { name: "max_degree_ge_3", eval: has_star_of_three },
        Predicate { name: "has_cycle", eval: has_cycle },
        Predicate { name: "always", eval: always },
    ]
}

/// Ten predicate pairs for the exhaustive FKG check.
pub fn fkg_catalogue_pairs() -> Vec<(Predicate, Predicate)> {
    let c = increasing_catalogue();
    let pair = |a: usize, b: usize| (c[a], c[b]);
    vec![
        pair(0, 0),
        pair(1, 2),
        pair(1, 3),
        pair(2, 3),
        pair(4, 1),
        pair(5, 2),
        pair(6, 4),
        pair(7, 8),
        pair(8, 3),
        pair(9, 1),
    ]
}
