use graph_core::{Graph, VertexSet};

use crate::linkage::SearchOutcome;
use crate::HamError;

/// Embeds a fixed template into a host by depth-first search.
///
/// Template vertices are placed in an order that maximises links to
/// already placed vertices. Host candidates are tried in increasing order
/// of their degree into the still-available vertices, so vertices that are
/// hard to cover are used first.
pub struct TemplateEmbedder<'a> {
    host: &'a Graph,
    template: &'a Graph,
}

struct Plan {
    order: Vec<usize>,
    /// For each position, the template vertices placed earlier and adjacent.
    back: Vec<Vec<usize>>,
}

fn plan(template: &Graph, root: usize) -> Plan {
    let v = template.n();
    let mut placed = vec![false; v];
    let mut links = vec![0usize; v];
    let mut order = Vec::with_capacity(v);
    let mut next = root;
    for _ in 0..v {
        placed[next] = true;
        order.push(next);
        for u in template.neighbors(next) {
            links[u] += 1;
        }
        let best = (0..v)
            .filter(|&u| !placed[u])
            .max_by_key(|&u| (links[u], template.degree(u), std::cmp::Reverse(u)));
        match best {
            Some(u) => next = u,
            None => break,
        }
    }
    let position: Vec<usize> = {
        let mut pos = vec![0; v];
        for (i, &x) in order.iter().enumerate() {
            pos[x] = i;
        }
        pos
    };
    let back = order
        .iter()
        .enumerate()
        .map(|(i, &x)| template.neighbors(x).filter(|&u| position[u] < i).collect())
        .collect();
    Plan { order, back }
}

fn mix(v: usize, salt: u64) -> u64 {
    let mut z = (v as u64) ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

struct Run<'a> {
    host: &'a Graph,
    plan: &'a Plan,
    /// Available and not yet used host vertices.
    free: VertexSet,
    mapping: Vec<usize>,
    budget: u64,
    exhausted: bool,
    salt: u64,
}

impl Run<'_> {
    fn extend(&mut self, position: usize) -> bool {
        if position == self.plan.order.len() {
            return true;
        }
        if self.budget == 0 {
            self.exhausted = true;
            return false;
        }
        self.budget -= 1;
        let x = self.plan.order[position];
        let mut candidates = self.free.clone();
        for &u in &self.plan.back[position] {
            candidates.intersect_words(self.host.row(self.mapping[u]));
        }
        let mut ranked: Vec<(usize, u64, usize)> = candidates
            .iter()
            .map(|h| (self.host.degree_into(h, &self.free), mix(h, self.salt), h))
            .collect();
        ranked.sort_unstable();
        for (_, _, h) in ranked {
            self.free.remove(h);
            self.mapping[x] = h;
            if self.extend(position + 1) {
                return true;
            }
            self.free.insert(h);
            if self.exhausted {
                return false;
            }
        }
        false
    }
}

impl<'a> TemplateEmbedder<'a> {
    pub fn new(host: &'a Graph, template: &'a Graph) -> Self {
        TemplateEmbedder { host, template }
    }

    /// An injective homomorphism of the template into `host[available]`,
    /// as `mapping[x] = host vertex`. With `pin = (x, h)` the template
    /// vertex `x` must map to `h`.
    pub fn embed(
        &self,
        available: &VertexSet,
        pin: Option<(usize, usize)>,
        budget: u64,
        salt: u64,
    ) -> (SearchOutcome<Vec<usize>>, u64) {
        let v = self.template.n();
        if v == 0 {
            return (SearchOutcome::Found(Vec::new()), 0);
        }
        if available.len() < v {
            return (SearchOutcome::Absent, 0);
        }
        let root = pin.map_or_else(|| (0..v).max_by_key(|&x| self.template.degree(x)).unwrap_or(0), |(x, _)| x);
        let plan = plan(self.template, root);
        let mut run = Run {
            host: self.host,
            plan: &plan,
            free: available.clone(),
            mapping: vec![usize::MAX; v],
            budget,
            exhausted: false,
            salt,
        };
        let found = match pin {
            Some((x, h)) => {
                if !run.free.contains(h) {
                    return (SearchOutcome::Absent, 0);
                }
                run.free.remove(h);
                run.mapping[x] = h;
                run.budget -= run.budget.min(1);
                run.extend(1)
            }
            None => run.extend(0),
        };
        let spent = budget - run.budget;
        let outcome = if found {
            SearchOutcome::Found(run.mapping)
        } else if run.exhausted {
            SearchOutcome::BudgetExceeded
        } else {
            SearchOutcome::Absent
        };
        (outcome, spent)
    }
}

/// Vertex-disjoint template copies covering exactly `part`, as mappings.
///
/// Copies are placed one at a time, each forced to cover the remaining
/// vertex of smallest remaining degree. A failed attempt restarts with a
/// different tie-breaking salt. `GaveUp` means every restart failed inside
/// its share of the budget; it is not a proof of absence.
pub fn find_template_factor(
    host: &Graph,
    template: &Graph,
    part: &[usize],
    budget: u64,
    restarts: usize,
) -> Result<SearchOutcome<Vec<Vec<usize>>>, HamError> {
    let v = template.n();
    if v == 0 || part.len() % v != 0 {
        return Err(HamError::Parameter(format!("{} vertices cannot be tiled by a {v}-vertex template", part.len())));
    }
    if part.iter().any(|&h| h >= host.n()) {
        return Err(HamError::Parameter("part contains a vertex outside the host".into()));
    }
    let embedder = TemplateEmbedder::new(host, template);
    // Pinned template vertices are tried by increasing degree.
    let mut pins: Vec<usize> = (0..v).collect();
    pins.sort_by_key(|&x| (template.degree(x), x));
    let per_call = (budget / 16).max(1_000);
    let mut remaining_budget = budget;
    let mut hit_cap = false;
    for attempt in 0..restarts.max(1) {
        let salt = attempt as u64;
        let mut free = VertexSet::from_iter_with_capacity(host.n(), part.iter().copied());
        let mut copies = Vec::with_capacity(part.len() / v);
        let mut stuck = false;
        while !free.is_empty() {
            let target = free
                .iter()
                .min_by_key(|&h| (host.degree_into(h, &free), mix(h, salt)))
                .expect("free is non-empty");
            let mut placed = None;
            for &x in pins.iter().take(MAX_PINS) {
                if remaining_budget == 0 {
                    return Ok(SearchOutcome::BudgetExceeded);
                }
                let cap = per_call.min(remaining_budget);
                let (outcome, spent) = embedder.embed(&free, Some((x, target)), cap, salt);
                remaining_budget -= spent.min(remaining_budget);
                match outcome {
                    SearchOutcome::Found(mapping) => {
                        placed = Some(mapping);
                        break;
                    }
                    SearchOutcome::BudgetExceeded => hit_cap = true,
                    _ => {}
                }
            }
            match placed {
                Some(mapping) => {
                    for &h in &mapping {
                        free.remove(h);
                    }
                    copies.push(mapping);
                }
                None => {
                    stuck = true;
                    break;
                }
            }
        }
        if !stuck {
            return Ok(SearchOutcome::Found(copies));
        }
    }
    Ok(if hit_cap && remaining_budget == 0 { SearchOutcome::BudgetExceeded } else { SearchOutcome::GaveUp })
}

/// Template vertices tried as the preimage of each hard host vertex.
const MAX_PINS: usize = 6;
