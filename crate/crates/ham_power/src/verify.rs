use graph_core::{Edge, Graph, VertexSet};
use pattern_tools::f_equipartition;
use serde::Serialize;
use structure_checkers::{contains_path_power, verify_ham_power};

use crate::linkage::Linkage;
use crate::matching::satisfies_threshold;
use crate::stages::{stage4_pairs, Setup, Trace, STAGE_NAMES};

/// Independent check of one stage that reported success.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StageVerdict {
    pub stage: String,
    pub verified: Result<(), String>,
}

/// Re-checks every structure recorded for a successful stage against the
/// final bought graph. `presented` is the full presentation order; its
/// first `3 t_i` edges are the graph the Stage IV partition had to avoid.
pub fn verify_trace(setup: &Setup, trace: &Trace, bought: &Graph, presented: &[Edge]) -> Vec<StageVerdict> {
    let mut verdicts = Vec::new();
    let checks: [fn(&Setup, &Trace, &Graph, &[Edge]) -> Result<(), String>; 4] =
        [check_stage1, check_stage2, check_stage3, check_stage4];
    for (i, check) in checks.iter().enumerate() {
        if trace.stage_success[i] {
            verdicts.push(StageVerdict { stage: STAGE_NAMES[i].into(), verified: check(setup, trace, bought, presented) });
        }
    }
    if let Some(order) = &trace.order {
        let verified = match verify_ham_power(bought, order, setup.k()) {
            Ok(true) => Ok(()),
            Ok(false) => Err("cyclic order is not a power of a Hamilton cycle in the bought graph".into()),
            Err(e) => Err(e.to_string()),
        };
        verdicts.push(StageVerdict { stage: "cycle".into(), verified });
    }
    verdicts
}

fn disjoint_union(n: usize, sets: impl IntoIterator<Item = usize>) -> Result<VertexSet, String> {
    let mut seen = VertexSet::new(n);
    for v in sets {
        if v >= n || !seen.insert(v) {
            return Err(format!("vertex {v} is used twice or out of range"));
        }
    }
    Ok(seen)
}

fn same_part(parts: &[Vec<usize>], vertices: &[usize]) -> bool {
    parts.iter().any(|p| vertices.iter().all(|v| p.contains(v)))
}

fn check_stage1(setup: &Setup, trace: &Trace, bought: &Graph, _: &[Edge]) -> Result<(), String> {
    let params = &setup.params;
    let k = setup.k();
    if trace.absorbers.len() != params.eta {
        return Err(format!("{} absorbers, expected {}", trace.absorbers.len(), params.eta));
    }
    let covered = disjoint_union(params.config.n, trace.absorbers.iter().flat_map(|a| a.vertices()))?;
    if covered.to_vec() != setup.layout.u1 {
        return Err("absorbers do not cover U_1 exactly".into());
    }
    for (i, absorber) in trace.absorbers.iter().enumerate() {
        if absorber.spine.len() != params.s {
            return Err(format!("absorber {i} has a spine of length {}", absorber.spine.len()));
        }
        absorber.verify(bought, k).map_err(|e| format!("absorber {i}: {e}"))?;
        let vertices: Vec<usize> = absorber.vertices().collect();
        if !same_part(&setup.layout.stage1_parts, &vertices) {
            return Err(format!("absorber {i} crosses Stage I parts"));
        }
    }
    Ok(())
}

fn check_linkages(
    n: usize,
    r: usize,
    bought: &Graph,
    linkages: &[Linkage],
    allowed_of: impl Fn(usize) -> Vec<usize>,
) -> Result<(), String> {
    disjoint_union(n, linkages.iter().flat_map(|l| l.sequence()))?;
    for (i, l) in linkages.iter().enumerate() {
        let allowed = VertexSet::from_iter_with_capacity(n, allowed_of(i));
        l.verify(bought, r, &allowed).map_err(|e| format!("linkage {i}: {e}"))?;
    }
    Ok(())
}

fn check_stage2(setup: &Setup, trace: &Trace, bought: &Graph, _: &[Edge]) -> Result<(), String> {
    let params = &setup.params;
    let (n, k, r) = (params.config.n, params.config.k, params.config.r);
    if trace.stage2_linkages.len() + 1 != trace.absorbers.len() {
        return Err("wrong number of Stage II linkages".into());
    }
    let mut group_of = vec![0; trace.stage2_linkages.len()];
    for (a, group) in setup.layout.pair_groups.iter().enumerate() {
        for &i in group {
            group_of[i] = a;
        }
    }
    for (i, l) in trace.stage2_linkages.iter().enumerate() {
        if l.pair.a != trace.absorbers[i].final_endsequence(k) || l.pair.b != trace.absorbers[i + 1].initial_endsequence(k) {
            return Err(format!("Stage II linkage {i} joins the wrong endsequences"));
        }
    }
    // Endsequences repeat across consecutive pairs only through distinct
    // absorbers, so the internal vertices are what must be disjoint.
    disjoint_union(n, trace.stage2_linkages.iter().flat_map(|l| l.internal.iter().copied()))?;
    for (i, l) in trace.stage2_linkages.iter().enumerate() {
        check_linkages(n, r, bought, std::slice::from_ref(l), |_| setup.layout.w_parts[group_of[i]].clone())?;
    }
    let mut q0 = Vec::new();
    for (i, absorber) in trace.absorbers.iter().enumerate() {
        q0.extend(&absorber.spine);
        if let Some(l) = trace.stage2_linkages.get(i) {
            q0.extend(&l.internal);
        }
    }
    if q0 != trace.q0 || !contains_path_power(bought, &q0, k) {
        return Err("Q_0 is not the path power through absorbers and linkages".into());
    }
    Ok(())
}

fn check_stage3(setup: &Setup, trace: &Trace, bought: &Graph, _: &[Edge]) -> Result<(), String> {
    let params = &setup.params;
    let (n, k, q) = (params.config.n, params.config.k, params.config.q);
    let mut outside = VertexSet::from_iter_with_capacity(n, setup.layout.u1.iter().copied());
    for l in &trace.stage2_linkages {
        for &x in &l.internal {
            outside.insert(x);
        }
    }
    let u3: Vec<usize> = (0..n).filter(|&v| !outside.contains(v)).collect();
    let parts = f_equipartition(&u3, params.sigma, q).map_err(|e| e.to_string())?;
    if parts != trace.stage3_parts {
        return Err("Stage III parts differ from the equipartition of U_3".into());
    }
    let covered = disjoint_union(n, trace.paths.iter().flatten().copied())?;
    if covered.to_vec() != u3 || trace.paths.len() != params.nu {
        return Err("paths do not tile U_3".into());
    }
    for (i, path) in trace.paths.iter().enumerate() {
        if path.len() != q || !contains_path_power(bought, path, k) {
            return Err(format!("path {i} is not a P_q^k in the bought graph"));
        }
        if !same_part(&parts, path) {
            return Err(format!("path {i} crosses Stage III parts"));
        }
    }
    Ok(())
}

fn check_stage4(setup: &Setup, trace: &Trace, bought: &Graph, presented: &[Edge]) -> Result<(), String> {
    let params = &setup.params;
    let (n, k, r) = (params.config.n, params.config.k, params.config.r);
    let pairs = stage4_pairs(trace, k);
    let x_sets: Vec<Vec<usize>> = pairs.iter().map(|p| p.vertices().collect()).collect();
    if x_sets != trace.x_sets {
        return Err("X sets differ from the path endsequences".into());
    }
    let absorption: Vec<usize> = trace.absorbers.iter().map(|a| a.absorption_vertex).collect();
    for (a, y) in trace.y_sets.iter().enumerate() {
        if y.as_slice() != &absorption[a * params.zeta..(a + 1) * params.zeta] {
            return Err(format!("Y_{a} is not the expected block of absorption vertices"));
        }
    }
    let mut sizes: Vec<usize> = trace.j_groups.iter().map(Vec::len).collect();
    sizes.sort_unstable();
    let mut indices: Vec<usize> = trace.j_groups.iter().flatten().copied().collect();
    indices.sort_unstable();
    if indices != (0..pairs.len()).collect::<Vec<_>>() || sizes.last().unwrap_or(&0) - sizes.first().unwrap_or(&0) > 1 {
        return Err("J is not an equipartition of the pair indices".into());
    }
    let prior_len = (3 * params.stage_steps).min(presented.len());
    let prior = Graph::from_edges(n, presented[..prior_len].iter().copied()).map_err(|e| e.to_string())?;
    if !satisfies_threshold(&prior, &x_sets, &trace.y_sets, &trace.j_groups, params.threshold) {
        return Err("J violates the neighbourhood threshold".into());
    }
    let mut group_of = vec![0; pairs.len()];
    for (a, group) in trace.j_groups.iter().enumerate() {
        for &i in group {
            group_of[i] = a;
        }
    }
    if trace.stage4_linkages.len() != pairs.len() {
        return Err("wrong number of Stage IV linkages".into());
    }
    for (i, l) in trace.stage4_linkages.iter().enumerate() {
        if l.pair != pairs[i] {
            return Err(format!("Stage IV linkage {i} joins the wrong endsequences"));
        }
    }
    disjoint_union(n, trace.stage4_linkages.iter().flat_map(|l| l.internal.iter().copied()))?;
    for (i, l) in trace.stage4_linkages.iter().enumerate() {
        check_linkages(n, r, bought, std::slice::from_ref(l), |_| trace.y_sets[group_of[i]].clone())?;
    }
    let used: Vec<usize> = trace.stage4_linkages.iter().flat_map(|l| l.internal.clone()).collect();
    let leftover: Vec<usize> = absorption.iter().copied().filter(|v| !used.contains(v)).collect();
    if leftover != trace.leftover {
        return Err("leftover vertices differ from the unused absorption vertices".into());
    }
    Ok(())
}
