use std::collections::HashMap;
use std::sync::Arc;

use graph_core::{Graph, VertexSet};
use pattern_tools::{f_equipartition, path_power};
use process_engine::StageRecord;
use serde::Serialize;
use structure_checkers::{contains_path_power, verify_ham_power};

use crate::absorber::{build_absorber_template, Absorber, EmbeddedAbsorber};
use crate::linkage::{find_linkage_family, EndsequencePair, Linkage, SearchOutcome};
use crate::matching::sparse_partition_match;
use crate::params::HamPowerParams;
use crate::search::find_template_factor;
use crate::HamError;

pub(crate) const STAGE_NAMES: [&str; 4] = ["I", "II", "III", "IV"];
const FACTOR_RESTARTS: usize = 4;
const NONE: u32 = u32::MAX;

/// Vertex sets fixed before the process starts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Layout {
    pub u1: Vec<usize>,
    pub u2: Vec<usize>,
    pub stage1_parts: Vec<Vec<usize>>,
    pub w_parts: Vec<Vec<usize>>,
    /// `pair_groups[a]` lists the Stage II pairs `i`, each joining absorber
    /// `i` to absorber `i + 1`, whose linkages use `w_parts[a]`.
    pub pair_groups: Vec<Vec<usize>>,
}

impl Layout {
    pub fn new(params: &HamPowerParams) -> Result<Layout, HamError> {
        let param = |e: pattern_tools::PatternError| HamError::Parameter(e.to_string());
        let u1: Vec<usize> = (0..params.u1_size).collect();
        let u2: Vec<usize> = (params.u1_size..params.u1_size + params.u2_size).collect();
        let stage1_parts = f_equipartition(&u1, params.pi, params.s + 1).map_err(param)?;
        let w_parts = f_equipartition(&u2, params.xi, 1).map_err(param)?;
        let pairs: Vec<usize> = (0..params.eta - 1).collect();
        let pair_groups =
            if pairs.is_empty() { vec![Vec::new(); params.xi] } else { f_equipartition(&pairs, params.xi, 1).map_err(param)? };
        Ok(Layout { u1, u2, stage1_parts, w_parts, pair_groups })
    }
}

/// Everything shared by the trials of one parameter set.
#[derive(Debug)]
pub struct Setup {
    pub params: HamPowerParams,
    pub template: Absorber,
    pub path_template: Graph,
    pub layout: Layout,
}

impl Setup {
    pub fn new(params: HamPowerParams) -> Result<Arc<Setup>, HamError> {
        let c = &params.config;
        let template = build_absorber_template(c.j, c.ell, c.k)?;
        let path_template = path_power(c.q, c.k);
        let layout = Layout::new(&params)?;
        Ok(Arc::new(Setup { params, template, path_template, layout }))
    }

    pub fn k(&self) -> usize {
        self.params.config.k
    }
}

/// Structures found so far; later fields stay empty after a failure.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Trace {
    /// Stages whose end-of-stage search succeeded.
    pub stage_success: [bool; 4],
    pub absorbers: Vec<EmbeddedAbsorber>,
    pub stage2_linkages: Vec<Linkage>,
    pub q0: Vec<usize>,
    pub u3: Vec<usize>,
    pub stage3_parts: Vec<Vec<usize>>,
    pub paths: Vec<Vec<usize>>,
    pub x_sets: Vec<Vec<usize>>,
    pub y_sets: Vec<Vec<usize>>,
    pub j_groups: Vec<Vec<usize>>,
    pub stage4_linkages: Vec<Linkage>,
    pub leftover: Vec<usize>,
    pub order: Option<Vec<usize>>,
}

impl Trace {
    /// Host paths `Q_0, Q_1, …, Q_ν` in cycle order.
    pub fn all_paths(&self) -> Vec<&[usize]> {
        std::iter::once(self.q0.as_slice()).chain(self.paths.iter().map(Vec::as_slice)).collect()
    }
}

/// The four stages as a state machine over bought graphs.
///
/// `stage()` is the stage currently buying, or 5 once all have ended.
/// `end_stage` runs the end-of-stage search on the given bought graph and
/// prepares the next stage's vertex sets.
pub struct StageMachine {
    setup: Arc<Setup>,
    stage: usize,
    failed: bool,
    part_of: Vec<u32>,
    log: Vec<StageRecord>,
    trace: Trace,
}

fn assign(part_of: &mut [u32], parts: &[Vec<usize>]) {
    part_of.fill(NONE);
    for (a, part) in parts.iter().enumerate() {
        for &v in part {
            part_of[v] = a as u32;
        }
    }
}

impl StageMachine {
    pub fn new(setup: Arc<Setup>) -> Self {
        let mut part_of = vec![NONE; setup.params.config.n];
        assign(&mut part_of, &setup.layout.stage1_parts);
        StageMachine { setup, stage: 1, failed: false, part_of, log: Vec::new(), trace: Trace::default() }
    }

    pub fn setup(&self) -> &Arc<Setup> {
        &self.setup
    }

    pub fn stage(&self) -> usize {
        self.stage
    }

    pub fn failed(&self) -> bool {
        self.failed
    }

    pub fn log(&self) -> &[StageRecord] {
        &self.log
    }

    pub fn trace(&self) -> &Trace {
        &self.trace
    }

    /// Whether the current stage buys the edge `uv`.
    pub fn wants(&self, u: usize, v: usize) -> bool {
        !self.failed && self.stage <= 4 && self.part_of[u] != NONE && self.part_of[u] == self.part_of[v]
    }

    fn fail(&mut self, stage: usize, detail: String) {
        self.failed = true;
        self.part_of.fill(NONE);
        self.log.push(StageRecord::new(STAGE_NAMES[stage - 1], false, detail));
    }

    /// Ends the current stage. `prior` yields all edges presented during
    /// Stages I to III and is called only when Stage IV is prepared.
    pub fn end_stage(&mut self, bought: &Graph, prior: &dyn Fn() -> Graph) -> Result<(), HamError> {
        let stage = self.stage;
        if stage > 4 {
            return Ok(());
        }
        self.stage += 1;
        if self.failed {
            if !self.log.iter().any(|r| r.stage == STAGE_NAMES[stage - 1]) {
                self.log.push(StageRecord::new(STAGE_NAMES[stage - 1], false, "skipped after an earlier failure"));
            }
            return Ok(());
        }
        let result = match stage {
            1 => self.end_stage1(bought),
            2 => self.end_stage2(bought),
            3 => self.end_stage3(bought),
            _ => self.end_stage4(bought),
        }?;
        match result {
            Ok(detail) => {
                self.trace.stage_success[stage - 1] = true;
                self.log.push(StageRecord::new(STAGE_NAMES[stage - 1], true, detail));
                if stage == 3 {
                    self.prepare_stage4(&prior())?;
                }
            }
            Err(detail) => self.fail(stage, detail),
        }
        Ok(())
    }

    fn end_stage1(&mut self, bought: &Graph) -> Result<Result<String, String>, HamError> {
        let setup = Arc::clone(&self.setup);
        let budget = setup.params.config.factor_budget;
        let k = setup.k();
        let mut absorbers = Vec::with_capacity(setup.params.eta);
        for (a, part) in setup.layout.stage1_parts.iter().enumerate() {
            match find_template_factor(bought, &setup.template.graph, part, budget, FACTOR_RESTARTS)? {
                SearchOutcome::Found(copies) => {
                    absorbers.extend(copies.iter().map(|m| EmbeddedAbsorber::from_mapping(&setup.template, m)));
                }
                other => {
                    return Ok(Err(format!(
                        "absorber factor of part {a} ({} vertices): {}",
                        part.len(),
                        other.label()
                    )))
                }
            }
        }
        for absorber in &absorbers {
            absorber.verify(bought, k).map_err(HamError::Construction)?;
        }
        let detail = format!("{} absorbers in {} parts", absorbers.len(), setup.layout.stage1_parts.len());
        self.trace.absorbers = absorbers;
        // Stage II buys inside W_a together with the endsequences of the
        // pairs assigned to group a.
        let parts: Vec<Vec<usize>> = setup
            .layout
            .w_parts
            .iter()
            .zip(&setup.layout.pair_groups)
            .map(|(w, group)| {
                let mut set = w.clone();
                for pair in group.iter().map(|&i| self.stage2_pair(i)) {
                    set.extend(pair.vertices());
                }
                set
            })
            .collect();
        assign(&mut self.part_of, &parts);
        Ok(Ok(detail))
    }

    /// Joins the end of absorber `i` to the start of absorber `i + 1`.
    fn stage2_pair(&self, i: usize) -> EndsequencePair {
        let k = self.setup.k();
        EndsequencePair::new(
            self.trace.absorbers[i].final_endsequence(k),
            self.trace.absorbers[i + 1].initial_endsequence(k),
        )
    }

    fn end_stage2(&mut self, bought: &Graph) -> Result<Result<String, String>, HamError> {
        let setup = Arc::clone(&self.setup);
        let params = &setup.params;
        let (n, k, r) = (params.config.n, params.config.k, params.config.r);
        let mut linkages: Vec<Option<Linkage>> = vec![None; params.eta - 1];
        for (a, (w, group)) in setup.layout.w_parts.iter().zip(&setup.layout.pair_groups).enumerate() {
            let family: Vec<EndsequencePair> = group.iter().map(|&i| self.stage2_pair(i)).collect();
            let allowed = VertexSet::from_iter_with_capacity(n, w.iter().copied());
            match find_linkage_family(bought, &family, r, &allowed, params.config.linkage_budget)? {
                SearchOutcome::Found(found) => {
                    for (&i, l) in group.iter().zip(found) {
                        linkages[i] = Some(l);
                    }
                }
                other => return Ok(Err(format!("linkage group {a} ({} pairs): {}", group.len(), other.label()))),
            }
        }
        let linkages: Vec<Linkage> = linkages.into_iter().map(|l| l.expect("every pair is in a group")).collect();
        let mut q0 = Vec::new();
        for (i, absorber) in self.trace.absorbers.iter().enumerate() {
            q0.extend(&absorber.spine);
            if let Some(l) = linkages.get(i) {
                q0.extend(&l.internal);
            }
        }
        if !contains_path_power(bought, &q0, k) {
            return Err(HamError::Construction("absorbers and Stage II linkages do not form a path power".into()));
        }
        let mut used = VertexSet::from_iter_with_capacity(n, setup.layout.u1.iter().copied());
        for l in &linkages {
            for &x in &l.internal {
                used.insert(x);
            }
        }
        let u3: Vec<usize> = (0..n).filter(|&v| !used.contains(v)).collect();
        if u3.len() != params.u3_size {
            return Err(HamError::Construction(format!("U_3 has {} vertices, expected {}", u3.len(), params.u3_size)));
        }
        let parts = f_equipartition(&u3, params.sigma, params.config.q)
            .map_err(|e| HamError::Construction(e.to_string()))?;
        assign(&mut self.part_of, &parts);
        let detail = format!("{} linkages of length {r}; Q_0 has {} vertices", linkages.len(), q0.len());
        self.trace.stage2_linkages = linkages;
        self.trace.q0 = q0;
        self.trace.u3 = u3;
        self.trace.stage3_parts = parts;
        Ok(Ok(detail))
    }

    fn end_stage3(&mut self, bought: &Graph) -> Result<Result<String, String>, HamError> {
        let setup = Arc::clone(&self.setup);
        let budget = setup.params.config.factor_budget;
        let mut paths = Vec::with_capacity(setup.params.nu);
        for (a, part) in self.trace.stage3_parts.iter().enumerate() {
            match find_template_factor(bought, &setup.path_template, part, budget, FACTOR_RESTARTS)? {
                SearchOutcome::Found(copies) => paths.extend(copies),
                other => {
                    return Ok(Err(format!("path-power factor of part {a} ({} vertices): {}", part.len(), other.label())))
                }
            }
        }
        let detail = format!("{} path powers on {} vertices each", paths.len(), setup.params.config.q);
        self.trace.paths = paths;
        Ok(Ok(detail))
    }

    /// Fixes `X_i`, `Y_a` and the partition `J`; a missing partition fails
    /// Stage IV before it buys anything.
    fn prepare_stage4(&mut self, prior: &Graph) -> Result<(), HamError> {
        let setup = Arc::clone(&self.setup);
        let params = &setup.params;
        let k = params.config.k;
        let pairs = stage4_pairs(&self.trace, k);
        let x_sets: Vec<Vec<usize>> = pairs.iter().map(|p| p.vertices().collect()).collect();
        let absorption: Vec<usize> = self.trace.absorbers.iter().map(|a| a.absorption_vertex).collect();
        let y_sets: Vec<Vec<usize>> =
            (0..params.xi).map(|a| absorption[a * params.zeta..(a + 1) * params.zeta].to_vec()).collect();
        let groups = sparse_partition_match(prior, &x_sets, &y_sets, params.threshold)?;
        self.trace.x_sets = x_sets;
        self.trace.y_sets = y_sets;
        match groups {
            Some(groups) => {
                let parts: Vec<Vec<usize>> = groups
                    .iter()
                    .zip(&self.trace.y_sets)
                    .map(|(group, y)| {
                        let mut set = y.clone();
                        for &i in group {
                            set.extend(&self.trace.x_sets[i]);
                        }
                        set
                    })
                    .collect();
                assign(&mut self.part_of, &parts);
                self.trace.j_groups = groups;
            }
            None => {
                self.stage = 5;
                self.fail(4, format!("no partition meets the neighbourhood threshold {}", params.threshold));
            }
        }
        Ok(())
    }

    fn end_stage4(&mut self, bought: &Graph) -> Result<Result<String, String>, HamError> {
        let setup = Arc::clone(&self.setup);
        let params = &setup.params;
        let (n, k, r) = (params.config.n, params.config.k, params.config.r);
        let pairs = stage4_pairs(&self.trace, k);
        let mut linkages: Vec<Option<Linkage>> = vec![None; pairs.len()];
        for (a, (group, y)) in self.trace.j_groups.iter().zip(&self.trace.y_sets).enumerate() {
            let family: Vec<EndsequencePair> = group.iter().map(|&i| pairs[i].clone()).collect();
            let allowed = VertexSet::from_iter_with_capacity(n, y.iter().copied());
            match find_linkage_family(bought, &family, r, &allowed, params.config.linkage_budget)? {
                SearchOutcome::Found(found) => {
                    for (&i, l) in group.iter().zip(found) {
                        linkages[i] = Some(l);
                    }
                }
                other => {
                    return Ok(Err(format!(
                        "linkage group {a} ({} pairs, {} allowed vertices): {}",
                        group.len(),
                        y.len(),
                        other.label()
                    )))
                }
            }
        }
        let linkages: Vec<Linkage> = linkages.into_iter().map(|l| l.expect("J partitions the pairs")).collect();
        let mut cycle = Vec::with_capacity(n);
        for (path, l) in self.trace.all_paths().into_iter().zip(&linkages) {
            cycle.extend_from_slice(path);
            cycle.extend(&l.internal);
        }
        let mut on_cycle = VertexSet::new(n);
        for &v in &cycle {
            on_cycle.insert(v);
        }
        let leftover: Vec<usize> =
            self.trace.absorbers.iter().map(|a| a.absorption_vertex).filter(|&v| !on_cycle.contains(v)).collect();
        let order = absorb(&cycle, &self.trace.absorbers, &leftover)?;
        if order.len() != n || !verify_ham_power(bought, &order, k).unwrap_or(false) {
            return Err(HamError::Construction("absorption did not give a spanning power of a cycle".into()));
        }
        let detail = format!("{} closing linkages; absorbed {} vertices", linkages.len(), leftover.len());
        self.trace.stage4_linkages = linkages;
        self.trace.leftover = leftover;
        self.trace.order = Some(order);
        Ok(Ok(detail))
    }
}

/// Pair `i` joins the end of `Q_i` to the start of `Q_{i+1}`, cyclically.
pub(crate) fn stage4_pairs(trace: &Trace, k: usize) -> Vec<EndsequencePair> {
    let paths = trace.all_paths();
    let count = paths.len();
    (0..count)
        .map(|i| {
            let (this, next) = (paths[i], paths[(i + 1) % count]);
            EndsequencePair::new(this[this.len() - k..].to_vec(), next[..k].to_vec())
        })
        .collect()
}

/// Replaces, for every leftover vertex, the spine of its absorber in the
/// cyclic order by the augmented path. The result is a rotation of the
/// input with the replacements applied.
pub fn absorb(cycle: &[usize], absorbers: &[EmbeddedAbsorber], leftover: &[usize]) -> Result<Vec<usize>, HamError> {
    if leftover.is_empty() {
        return Ok(cycle.to_vec());
    }
    let bug = |what: String| Err(HamError::Construction(what));
    let by_vertex: HashMap<usize, &EmbeddedAbsorber> = absorbers.iter().map(|a| (a.absorption_vertex, a)).collect();
    let position: HashMap<usize, usize> = cycle.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    if position.len() != cycle.len() {
        return bug("cyclic order repeats a vertex".into());
    }
    let len = cycle.len();
    let mut starts: HashMap<usize, &EmbeddedAbsorber> = HashMap::new();
    let mut covered = vec![false; len];
    for v in leftover {
        let Some(&absorber) = by_vertex.get(v) else {
            return bug(format!("leftover vertex {v} is not an absorption vertex"));
        };
        if position.contains_key(v) {
            return bug(format!("leftover vertex {v} already lies on the cycle"));
        }
        let Some(&start) = absorber.spine.first().and_then(|x| position.get(x)) else {
            return bug(format!("spine of absorber for {v} is not on the cycle"));
        };
        for (offset, &x) in absorber.spine.iter().enumerate() {
            let at = (start + offset) % len;
            if cycle[at] != x || covered[at] {
                return bug(format!("spine of absorber for {v} is not a contiguous free segment"));
            }
            covered[at] = true;
        }
        if starts.insert(start, absorber).is_some() {
            return bug(format!("absorber for {v} listed twice"));
        }
    }
    let first = *starts.keys().min().expect("leftover is non-empty");
    let mut out = Vec::with_capacity(len + leftover.len());
    let mut i = 0;
    while i < len {
        let at = (first + i) % len;
        match starts.get(&at) {
            Some(absorber) => {
                out.extend(&absorber.augmented);
                i += absorber.spine.len();
            }
            None => {
                out.push(cycle[at]);
                i += 1;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic(absorber_count: usize) -> (Graph, Vec<usize>, Vec<EmbeddedAbsorber>) {
        let template = build_absorber_template(3, 4, 2).unwrap();
        let size = template.order();
        let filler = 7;
        let n = absorber_count * size + filler;
        let mut cycle = Vec::new();
        let mut absorbers = Vec::new();
        for c in 0..absorber_count {
            let mapping: Vec<usize> = (0..size).map(|x| c * size + x).collect();
            let e = EmbeddedAbsorber::from_mapping(&template, &mapping);
            cycle.extend(&e.spine);
            absorbers.push(e);
        }
        cycle.extend(absorber_count * size..n);
        let mut host = Graph::empty(n);
        for i in 0..cycle.len() {
            for d in 1..=2 {
                host.add_edge(cycle[i], cycle[(i + d) % cycle.len()]);
            }
        }
        for e in &absorbers {
            for w in crate::absorber::path_power_edges(&e.augmented, 2) {
                host.add_edge(w.0, w.1);
            }
        }
        (host, cycle, absorbers)
    }

    #[test]
    fn empty_leftover_is_identity() {
        let (_, cycle, absorbers) = synthetic(1);
        assert_eq!(absorb(&cycle, &absorbers, &[]).unwrap(), cycle);
    }

    #[test]
    fn one_and_two_absorbers() {
        for count in [1, 2] {
            let (host, cycle, absorbers) = synthetic(count);
            let leftover: Vec<usize> = absorbers.iter().map(|a| a.absorption_vertex).collect();
            let order = absorb(&cycle, &absorbers, &leftover).unwrap();
            assert_eq!(order.len(), cycle.len() + count);
            assert!(verify_ham_power(&host, &order, 2).unwrap());
        }
    }

    #[test]
    fn broken_spine_is_a_hard_error() {
        let (_, mut cycle, absorbers) = synthetic(1);
        cycle.swap(3, 4);
        let v = absorbers[0].absorption_vertex;
        assert!(matches!(absorb(&cycle, &absorbers, &[v]), Err(HamError::Construction(_))));
    }
}
