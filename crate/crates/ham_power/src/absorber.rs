use graph_core::Graph;
use pattern_tools::{max_one_density_by_flow, Density};
use serde::{Deserialize, Serialize};
use structure_checkers::{contains_path_power, verify_ham_power};

use crate::HamError;

/// A `(j, ℓ, k)`-absorber on template labels `0..=s`.
///
/// The spine is `0, 1, …, s-1` split into consecutive segments
/// `U_1 W_1 U_2 W_2 … U_j W_j T` with `|U_i| = |W_i| = ℓ + 2` and `|T| = ℓ`.
/// The absorption vertex is `s` and the augmented path visits
/// `U_1 U_2 W_1 U_3 W_2 … U_j W_{j-1} v W_j T`, every segment forwards.
/// The edge set is `P^k ∪ Q^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Absorber {
    pub k: usize,
    pub j: usize,
    pub ell: usize,
    pub spine: Vec<usize>,
    pub absorption_vertex: usize,
    pub augmented: Vec<usize>,
    pub graph: Graph,
}

/// `s = j(2ℓ + 4) + ℓ`.
pub fn spine_length(j: usize, ell: usize) -> usize {
    j * (2 * ell + 4) + ell
}

/// Edges of the `k`-th power of the path visiting `sequence` in order.
pub fn path_power_edges(sequence: &[usize], k: usize) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for i in 0..sequence.len() {
        for d in 1..=k {
            if i + d < sequence.len() {
                edges.push((sequence[i], sequence[i + d]));
            }
        }
    }
    edges
}

impl Absorber {
    pub fn order(&self) -> usize {
        self.spine.len() + 1
    }

    pub fn s(&self) -> usize {
        self.spine.len()
    }

    /// Checks the defining invariants, including a mechanical swap test:
    /// inside a synthetic power of a cycle through the spine, replacing the
    /// spine by the augmented path must again give a power of a cycle.
    pub fn check_invariants(&self) -> Result<(), HamError> {
        let k = self.k;
        let s = self.s();
        let fail = |what: &str| Err(HamError::Construction(format!("absorber ({}, {}, {k}): {what}", self.j, self.ell)));
        if s != spine_length(self.j, self.ell) {
            return fail("spine length differs from j(2ℓ+4)+ℓ");
        }
        if self.augmented.len() != s + 1 {
            return fail("augmented path has the wrong length");
        }
        let mut q_sorted = self.augmented.clone();
        q_sorted.sort_unstable();
        let mut expected: Vec<usize> = self.spine.clone();
        expected.push(self.absorption_vertex);
        expected.sort_unstable();
        if q_sorted != expected || self.spine.contains(&self.absorption_vertex) {
            return fail("augmented path is not spine plus absorption vertex");
        }
        if self.spine[..k] != self.augmented[..k] || self.spine[s - k..] != self.augmented[s + 1 - k..] {
            return fail("endsequences of spine and augmented path differ");
        }
        if !contains_path_power(&self.graph, &self.spine, k) || !contains_path_power(&self.graph, &self.augmented, k) {
            return fail("edge set misses a path power");
        }
        // Synthetic host: the spine closed into a cycle through 2k + 1 new
        // vertices, plus the augmented path power.
        let extra = 2 * k + 1;
        let n = s + 1 + extra;
        let outside: Vec<usize> = (s + 1..n).collect();
        let mut cycle: Vec<usize> = self.spine.clone();
        cycle.extend(&outside);
        let mut host = Graph::empty(n);
        for i in 0..cycle.len() {
            for d in 1..=k {
                host.add_edge(cycle[i], cycle[(i + d) % cycle.len()]);
            }
        }
        for (u, v) in self.graph.edges() {
            host.add_edge(u, v);
        }
        let mut swapped_cycle: Vec<usize> = self.augmented.clone();
        swapped_cycle.extend(&outside);
        // The original cycle avoids v; give v a spot-free check on the rest.
        let original_ok = {
            let restricted = host.induced(&cycle);
            let relabelled: Vec<usize> = (0..cycle.len()).collect();
            verify_ham_power(&restricted, &relabelled, k).unwrap_or(false)
        };
        if !original_ok || !verify_ham_power(&host, &swapped_cycle, k).unwrap_or(false) {
            return fail("swapping the spine for the augmented path does not give a power of a cycle");
        }
        Ok(())
    }

    pub fn max_one_density(&self) -> Result<Density, HamError> {
        max_one_density_by_flow(&self.graph).map_err(|e| HamError::Construction(e.to_string()))
    }
}

/// Builds the gadget and checks its invariants; a failed check is a bug.
pub fn build_absorber_template(j: usize, ell: usize, k: usize) -> Result<Absorber, HamError> {
    if k < 2 || j < 3 || ell < 2 * k {
        return Err(HamError::Parameter(format!("absorbers need k >= 2, j >= 3, ℓ >= 2k; got j={j}, ℓ={ell}, k={k}")));
    }
    let s = spine_length(j, ell);
    let block = ell + 2;
    // Segment ranges along the spine.
    let u = |i: usize| -> std::ops::Range<usize> { (2 * (i - 1)) * block..(2 * (i - 1) + 1) * block };
    let w = |i: usize| -> std::ops::Range<usize> { (2 * (i - 1) + 1) * block..(2 * i) * block };
    let tail = 2 * j * block..s;
    let spine: Vec<usize> = (0..s).collect();
    let v = s;
    let mut augmented: Vec<usize> = u(1).collect();
    augmented.extend(u(2));
    augmented.extend(w(1));
    for i in 3..=j {
        augmented.extend(u(i));
        augmented.extend(w(i - 1));
    }
    augmented.push(v);
    augmented.extend(w(j));
    augmented.extend(tail);
    let mut graph = Graph::empty(s + 1);
    for (a, b) in path_power_edges(&spine, k).into_iter().chain(path_power_edges(&augmented, k)) {
        graph.add_edge(a, b);
    }
    let absorber = Absorber { k, j, ell, spine, absorption_vertex: v, augmented, graph };
    absorber.check_invariants()?;
    Ok(absorber)
}

/// Smallest `ℓ` in `2k..=max_ell` whose absorber has `d* <= k + δ`.
pub fn find_ell0(j: usize, k: usize, delta: Density, max_ell: usize) -> Result<Option<(usize, Density)>, HamError> {
    let target = Density::from_integer(k as i64) + delta;
    for ell in 2 * k..=max_ell {
        let d = build_absorber_template(j, ell, k)?.max_one_density()?;
        if d <= target {
            return Ok(Some((ell, d)));
        }
    }
    Ok(None)
}

/// An absorber placed in a host graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddedAbsorber {
    pub spine: Vec<usize>,
    pub absorption_vertex: usize,
    pub augmented: Vec<usize>,
}

impl EmbeddedAbsorber {
    /// `mapping[x]` is the host vertex of template label `x`.
    pub fn from_mapping(template: &Absorber, mapping: &[usize]) -> Self {
        EmbeddedAbsorber {
            spine: template.spine.iter().map(|&x| mapping[x]).collect(),
            absorption_vertex: mapping[template.absorption_vertex],
            augmented: template.augmented.iter().map(|&x| mapping[x]).collect(),
        }
    }

    pub fn initial_endsequence(&self, k: usize) -> Vec<usize> {
        self.spine[..k].to_vec()
    }

    pub fn final_endsequence(&self, k: usize) -> Vec<usize> {
        self.spine[self.spine.len() - k..].to_vec()
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.spine.iter().copied().chain(std::iter::once(self.absorption_vertex))
    }

    /// Both path powers lie in `host` and the endsequences agree.
    pub fn verify(&self, host: &Graph, k: usize) -> Result<(), String> {
        let s = self.spine.len();
        if self.augmented.len() != s + 1 || s < 2 * k {
            return Err("malformed absorber".into());
        }
        let mut all: Vec<usize> = self.vertices().collect();
        all.sort_unstable();
        if all.windows(2).any(|w| w[0] == w[1]) || all.last().is_some_and(|&v| v >= host.n()) {
            return Err("absorber vertices are not distinct host vertices".into());
        }
        let mut q_sorted = self.augmented.clone();
        q_sorted.sort_unstable();
        if q_sorted != all {
            return Err("augmented path is not spine plus absorption vertex".into());
        }
        if self.spine[..k] != self.augmented[..k] || self.spine[s - k..] != self.augmented[s + 1 - k..] {
            return Err("endsequences differ".into());
        }
        if !contains_path_power(host, &self.spine, k) {
            return Err("spine power missing from host".into());
        }
        if !contains_path_power(host, &self.augmented, k) {
            return Err("augmented power missing from host".into());
        }
        Ok(())
    }
}
