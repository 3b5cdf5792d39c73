use std::collections::VecDeque;

use graph_core::{Graph, VertexSet};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::HamError;

const FREE: usize = usize::MAX;

/// Maximum bipartite matching, augmenting from `initial`.
///
/// `adj[x]` lists the right vertices adjacent to left vertex `x`.
/// `initial[x]` is either `None` or a right neighbour of `x`, and no right
/// vertex is used twice. Returns `mate[x]` for every left vertex.
pub fn hopcroft_karp(right_n: usize, adj: &[Vec<usize>], initial: &[Option<usize>]) -> Vec<Option<usize>> {
    let left_n = adj.len();
    let mut mate_left = vec![FREE; left_n];
    let mut mate_right = vec![FREE; right_n];
    for (x, m) in initial.iter().enumerate() {
        if let Some(y) = *m {
            debug_assert!(adj[x].contains(&y) && mate_right[y] == FREE);
            mate_left[x] = y;
            mate_right[y] = x;
        }
    }
    let mut dist = vec![0usize; left_n];
    loop {
        // Layered BFS from free left vertices.
        let mut queue = VecDeque::new();
        for x in 0..left_n {
            if mate_left[x] == FREE {
                dist[x] = 0;
                queue.push_back(x);
            } else {
                dist[x] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                let z = mate_right[y];
                if z == FREE {
                    found = true;
                } else if dist[z] == usize::MAX {
                    dist[z] = dist[x] + 1;
                    queue.push_back(z);
                }
            }
        }
        if !found {
            break;
        }
        let mut next_edge = vec![0usize; left_n];
        for x in 0..left_n {
            if mate_left[x] == FREE {
                augment(x, adj, &mut mate_left, &mut mate_right, &mut dist, &mut next_edge);
            }
        }
    }
    mate_left.into_iter().map(|y| (y != FREE).then_some(y)).collect()
}

fn augment(
    x: usize,
    adj: &[Vec<usize>],
    mate_left: &mut [usize],
    mate_right: &mut [usize],
    dist: &mut [usize],
    next_edge: &mut [usize],
) -> bool {
    while next_edge[x] < adj[x].len() {
        let y = adj[x][next_edge[x]];
        next_edge[x] += 1;
        let z = mate_right[y];
        let ok = z == FREE || (dist[z] == dist[x] + 1 && augment(z, adj, mate_left, mate_right, dist, next_edge));
        if ok {
            mate_left[x] = y;
            mate_right[y] = x;
            return true;
        }
    }
    dist[x] = usize::MAX;
    false
}

fn neighbourhood(g: &Graph, x: &[usize]) -> VertexSet {
    let mut set = VertexSet::new(g.n());
    for &v in x {
        set.union_with(&g.neighbor_set(v));
    }
    set
}

/// Whether `|N_g(X_i) ∩ Y_a| <= threshold` for every `a` and `i ∈ J_a`.
pub fn satisfies_threshold(
    g: &Graph,
    x_sets: &[Vec<usize>],
    y_sets: &[Vec<usize>],
    groups: &[Vec<usize>],
    threshold: usize,
) -> bool {
    groups.iter().zip(y_sets).all(|(group, y)| {
        let y = VertexSet::from_iter_with_capacity(g.n(), y.iter().copied());
        group.iter().all(|&i| neighbourhood(g, &x_sets[i]).intersection_len(&y) <= threshold)
    })
}

/// An equipartition `J_1, …, J_ξ` of the indices of `x_sets` with
/// `|N(X_i) ∩ Y_a| <= threshold` for every `i ∈ J_a`, or `None`.
///
/// Group `a` receives `⌊|X|/ξ⌋` mandatory slots and, while indices remain,
/// one optional slot. Mandatory slots are matched first and must all be
/// filled. When every assignment is allowed the result is the interval
/// partition with the larger groups first.
pub fn sparse_partition_match(
    g_prev: &Graph,
    x_sets: &[Vec<usize>],
    y_sets: &[Vec<usize>],
    threshold: usize,
) -> Result<Option<Vec<Vec<usize>>>, HamError> {
    let xi = y_sets.len();
    if xi == 0 {
        return Err(HamError::Parameter("at least one Y set is required".into()));
    }
    if x_sets.len() < xi {
        return Err(HamError::Parameter(format!("{} X sets cannot fill {xi} groups", x_sets.len())));
    }
    let zeta = y_sets[0].len();
    let mut seen = VertexSet::new(g_prev.n());
    for y in y_sets {
        if y.len() != zeta {
            return Err(HamError::Parameter("Y sets must have equal sizes".into()));
        }
        for &v in y {
            if v >= g_prev.n() || !seen.insert(v) {
                return Err(HamError::Parameter(format!("Y sets are not pairwise disjoint at vertex {v}")));
            }
        }
    }
    let y_bits: Vec<VertexSet> =
        y_sets.iter().map(|y| VertexSet::from_iter_with_capacity(g_prev.n(), y.iter().copied())).collect();
    let allowed: Vec<Vec<bool>> = x_sets
        .iter()
        .map(|x| {
            let nb = neighbourhood(g_prev, x);
            y_bits.iter().map(|y| nb.intersection_len(y) <= threshold).collect()
        })
        .collect();

    let count = x_sets.len();
    let (base, extra) = (count / xi, count % xi);
    // Slot numbering: mandatory slot m of group a is a * base + m; the
    // optional slot of group a is xi * base + a.
    let mandatory = xi * base;
    let slot_group = |slot: usize| if slot < mandatory { slot / base } else { slot - mandatory };
    let interval_group = |i: usize| {
        let big = extra * (base + 1);
        if i < big {
            i / (base + 1)
        } else {
            extra + (i - big) / base
        }
    };
    let interval_offset = |i: usize| {
        let big = extra * (base + 1);
        if i < big {
            i % (base + 1)
        } else {
            (i - big) % base
        }
    };

    let mandatory_adj: Vec<Vec<usize>> = (0..count)
        .map(|i| (0..xi).filter(|&a| allowed[i][a]).flat_map(|a| a * base..(a + 1) * base).collect())
        .collect();
    let initial: Vec<Option<usize>> = (0..count)
        .map(|i| {
            let (a, m) = (interval_group(i), interval_offset(i));
            (allowed[i][a] && m < base).then_some(a * base + m)
        })
        .collect();
    let first = hopcroft_karp(mandatory, &mandatory_adj, &initial);
    if first.iter().flatten().count() < mandatory {
        return Ok(None);
    }
    let mut matched = first;
    if extra > 0 {
        let slots = mandatory + xi;
        let full_adj: Vec<Vec<usize>> = (0..count)
            .map(|i| {
                let mut row = mandatory_adj[i].clone();
                row.extend((0..xi).filter(|&a| allowed[i][a]).map(|a| mandatory + a));
                row
            })
            .collect();
        let mut taken = vec![false; slots];
        for slot in matched.iter().flatten() {
            taken[*slot] = true;
        }
        for i in 0..count {
            let a = interval_group(i);
            if matched[i].is_none() && allowed[i][a] && !taken[mandatory + a] {
                matched[i] = Some(mandatory + a);
                taken[mandatory + a] = true;
            }
        }
        matched = hopcroft_karp(slots, &full_adj, &matched);
        if matched.iter().any(Option::is_none) {
            return Ok(None);
        }
    }
    let mut groups = vec![Vec::new(); xi];
    for (i, slot) in matched.iter().enumerate() {
        groups[slot_group(slot.expect("perfect on the left"))].push(i);
    }
    debug_assert!(satisfies_threshold(g_prev, x_sets, y_sets, &groups, threshold));
    Ok(Some(groups))
}

/// Sampling estimate of the sparseness constant of `v` in `h`.
///
/// Draws `samples` random subsets `U ⊆ v` of size `m` and, within each,
/// `inner` random `r`-sets `S`, counting those with no `h`-edge between a
/// vertex of `S` and `S ∪ r_set`. Returns the smallest observed value of
/// `(#independent / inner) · C(m, r) / m^r`, a diagnostic stand-in for the
/// largest admissible `λ`.
#[allow(clippy::too_many_arguments)]
pub fn sparseness_estimate<R: Rng + ?Sized>(
    h: &Graph,
    v: &[usize],
    r_set: &[usize],
    r: usize,
    m: usize,
    samples: usize,
    inner: usize,
    rng: &mut R,
) -> Option<f64> {
    if m > v.len() || r > m || r == 0 || samples == 0 || inner == 0 {
        return None;
    }
    let mut binom = 1.0f64;
    for i in 0..r {
        binom *= (m - i) as f64 / (i + 1) as f64;
    }
    let scale = binom / (m as f64).powi(r as i32);
    let mut worst = f64::INFINITY;
    let mut pool = v.to_vec();
    for _ in 0..samples {
        let (chosen, _) = pool.partial_shuffle(rng, m);
        let mut u = chosen.to_vec();
        let mut independent = 0usize;
        for _ in 0..inner {
            let (s, _) = u.partial_shuffle(rng, r);
            let clean = s.iter().all(|&x| s.iter().chain(r_set).all(|&y| x == y || !h.has_edge(x, y)));
            independent += usize::from(clean);
        }
        worst = worst.min(independent as f64 / inner as f64 * scale);
    }
    Some(worst)
}
