//! Cross-checks of the density routines against direct enumeration of edge
//! subsets, which is independent of the induced-subset shortcut.

use graph_core::Graph;
use num_rational::Rational64;
use pattern_tools::{
    complete_pattern, is_strictly_one_balanced, is_vertex_balanced, max_one_density, max_one_density_by_flow,
    path_power,
};
use proptest::prelude::*;

/// Maximum of `|E'| / (|V(E')| - 1)` over all non-empty edge subsets `E'`,
/// optionally restricted to subsets whose spanned graph is connected.
fn edge_subset_max_density(g: &Graph, connected_only: bool) -> Rational64 {
    let edges: Vec<(usize, usize)> = g.edges().collect();
    assert!(edges.len() <= 22, "oracle is exponential in the edge count");
    let mut best = Rational64::from_integer(0);
    for mask in 1u32..(1 << edges.len()) {
        let chosen: Vec<(usize, usize)> =
            edges.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
        let mut spanned: Vec<usize> = chosen.iter().flat_map(|&(u, v)| [u, v]).collect();
        spanned.sort_unstable();
        spanned.dedup();
        if connected_only && !spans_connected(&spanned, &chosen) {
            continue;
        }
        let d = Rational64::new(chosen.len() as i64, spanned.len() as i64 - 1);
        best = best.max(d);
    }
    best
}

fn spans_connected(vertices: &[usize], edges: &[(usize, usize)]) -> bool {
    let mut reached = vec![vertices[0]];
    let mut changed = true;
    while changed {
        changed = false;
        for &(u, v) in edges {
            let (hu, hv) = (reached.contains(&u), reached.contains(&v));
            if hu != hv {
                reached.push(if hu { v } else { u });
                changed = true;
            }
        }
    }
    reached.len() == vertices.len()
}

#[test]
fn cliques_have_half_their_order() {
    for r in 2..=6 {
        let k = complete_pattern(r);
        let expected = Rational64::new(r as i64, 2);
        assert_eq!(max_one_density(&k).unwrap(), expected);
        assert_eq!(edge_subset_max_density(&k, false), expected);
        assert!(is_strictly_one_balanced(&k).unwrap());
    }
}

#[test]
fn path_powers_stay_below_their_power() {
    for (q, k) in [(5usize, 2usize), (6, 2), (7, 3)] {
        let p = path_power(q, k);
        let d = max_one_density(&p).unwrap();
        assert!(d < Rational64::from_integer(k as i64), "d*(P_{q}^{k}) = {d}");
        assert_eq!(d, edge_subset_max_density(&p, false));
        assert_eq!(d, max_one_density_by_flow(&p).unwrap());
    }
}

fn small_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let mut g = Graph::empty(n);
            let mut i = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if bits[i] {
                        g.add_edge(u, v);
                    }
                    i += 1;
                }
            }
            g
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn maximiser_may_be_taken_connected(g in small_graph(7).prop_filter("oracle size", |g| g.edge_count() <= 14)) {
        let d = max_one_density(&g).unwrap();
        let connected = if g.edge_count() == 0 { Rational64::from_integer(0) } else { edge_subset_max_density(&g, true) };
        prop_assert_eq!(d, connected);
    }

    #[test]
    fn strict_balance_implies_vertex_balance(g in small_graph(7)) {
        if is_strictly_one_balanced(&g).unwrap() {
            prop_assert!(is_vertex_balanced(&g).unwrap());
        }
    }

    #[test]
    fn flow_route_matches_enumeration(g in small_graph(10)) {
        prop_assert_eq!(max_one_density_by_flow(&g).unwrap(), max_one_density(&g).unwrap());
    }

    #[test]
    fn stats_invariants(g in small_graph(8)) {
        let stats = pattern_tools::PatternStats::compute(&g).unwrap();
        prop_assert_eq!(stats.one_density, Rational64::new(g.edge_count() as i64, g.n() as i64 - 1));
        prop_assert!(stats.max_one_density >= stats.one_density);
        if stats.strictly_one_balanced {
            prop_assert_eq!(stats.max_one_density, stats.one_density);
        }
    }
}
