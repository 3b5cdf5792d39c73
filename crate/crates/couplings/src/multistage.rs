use graph_core::{complete_edge_count, sample_gnp, sample_process_prefix, Graph};
use rand::seq::index;
use rand::Rng;

use crate::CouplingError;

/// One draw of the multi-stage coupling.
///
/// `h[i] ~ G(n, p_i)` and `h_bar[i] ~ G(n, p̄_i)` are independent. When
/// `failure_step` is `None`, `h_hat[i]` was built from them; otherwise the
/// construction failed at that (1-based) stage and `h_hat` is the stage
/// split of a fresh random graph process.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultistageSample {
    pub h: Vec<Graph>,
    pub h_bar: Vec<Graph>,
    pub h_hat: Vec<Graph>,
    pub failure_step: Option<usize>,
}

impl MultistageSample {
    /// `H_i \ ∪_{j<i} Ĥ_j ⊆ Ĥ_i ⊆ H_i ∪ H̄_i` for every stage `i`.
    pub fn containments_hold(&self) -> bool {
        let n = self.h.first().map_or(0, Graph::n);
        let mut used = Graph::empty(n);
        for ((h, h_bar), h_hat) in self.h.iter().zip(&self.h_bar).zip(&self.h_hat) {
            let mut upper = h.clone();
            upper.union_with(h_bar);
            if !h.difference(&used).is_subgraph_of(h_hat) || !h_hat.is_subgraph_of(&upper) {
                return false;
            }
            used.union_with(h_hat);
        }
        true
    }
}

/// `p_i = (t_i/M)(1 - t_i^{-1/4})` and `p̄_i = (t_i/M) t_i^{-1/4}`; a stage
/// of length zero gets `p_i = p̄_i = 0`.
pub fn default_probabilities(n: usize, stage_lengths: &[usize]) -> (Vec<f64>, Vec<f64>) {
    let m = complete_edge_count(n).max(1) as f64;
    stage_lengths
        .iter()
        .map(|&t| {
            if t == 0 {
                return (0.0, 0.0);
            }
            let base = t as f64 / m;
            let slack = (t as f64).powf(-0.25);
            (base * (1.0 - slack), (base * slack).min(1.0))
        })
        .unzip()
}

fn check_probability(p: f64, what: &str) -> Result<(), CouplingError> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(CouplingError::Parameter(format!("{what} = {p} lies outside [0, 1]")))
    }
}

/// Stage split of the first `Σ t_i` steps of a fresh random graph process.
fn process_stages<R: Rng + ?Sized>(n: usize, stage_lengths: &[usize], rng: &mut R) -> Vec<Graph> {
    let total: usize = stage_lengths.iter().sum();
    let sequence = sample_process_prefix(n, total, rng).expect("stage lengths were validated");
    let mut stages = Vec::with_capacity(stage_lengths.len());
    let mut start = 0;
    for &t in stage_lengths {
        let edges = sequence.edges()[start..start + t].iter().copied();
        stages.push(Graph::from_edges(n, edges).expect("process edges are valid"));
        start += t;
    }
    stages
}

/// Samples the multi-stage coupling of stage graphs `Ĥ_1, …, Ĥ_k` with
/// binomial graphs.
pub fn sample_multistage<R: Rng + ?Sized>(
    n: usize,
    stage_lengths: &[usize],
    p: &[f64],
    p_bar: &[f64],
    rng: &mut R,
) -> Result<MultistageSample, CouplingError> {
    let stages = stage_lengths.len();
    if p.len() != stages || p_bar.len() != stages {
        return Err(CouplingError::Parameter("one p and one p̄ per stage are required".into()));
    }
    let total: usize = stage_lengths.iter().sum();
    if total > complete_edge_count(n) {
        return Err(CouplingError::Parameter(format!("stage lengths sum to {total}, more than M")));
    }
    for (&pi, &qi) in p.iter().zip(p_bar) {
        check_probability(pi, "p_i")?;
        check_probability(qi, "p̄_i")?;
    }
    let h: Vec<Graph> = p.iter().map(|&pi| sample_gnp(n, pi, rng).expect("checked")).collect();
    let h_bar: Vec<Graph> = p_bar.iter().map(|&qi| sample_gnp(n, qi, rng).expect("checked")).collect();
    let mut used = Graph::empty(n);
    let mut h_hat = Vec::with_capacity(stages);
    for i in 0..stages {
        let t = stage_lengths[i];
        let lower = h[i].difference(&used);
        let mut upper = h[i].clone();
        upper.union_with(&h_bar[i]);
        let upper = upper.difference(&used);
        if lower.edge_count() > t || upper.edge_count() < t {
            let fresh = process_stages(n, stage_lengths, rng);
            return Ok(MultistageSample { h, h_bar, h_hat: fresh, failure_step: Some(i + 1) });
        }
        let extra: Vec<_> = upper.difference(&h[i]).edges().collect();
        let mut stage = lower;
        for k in index::sample(rng, extra.len(), t - stage.edge_count()) {
            let (u, v) = extra[k];
            stage.add_edge(u, v);
        }
        used.union_with(&stage);
        h_hat.push(stage);
    }
    Ok(MultistageSample { h, h_bar, h_hat, failure_step: None })
}

/// One draw of the sandwich coupling `H ⊆ Ĝ ⊆ H′`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SandwichSample {
    pub h: Graph,
    pub g_hat: Graph,
    pub h_prime: Graph,
    pub ok: bool,
}

/// Single-stage coupling of `Ĝ ~ Ĝ(n, m)` with `H ~ G(n, p)` and
/// `H′ = H ∪ H̄ ~ G(n, p′)`, where `H̄ ~ G(n, 1 - (1-p′)/(1-p))`.
pub fn sample_sandwich<R: Rng + ?Sized>(
    n: usize,
    m: usize,
    p: f64,
    p_prime: f64,
    rng: &mut R,
) -> Result<SandwichSample, CouplingError> {
    let total = complete_edge_count(n);
    check_probability(p, "p")?;
    check_probability(p_prime, "p′")?;
    let density = if total == 0 { 0.0 } else { m as f64 / total as f64 };
    if !(p <= density && density <= p_prime) {
        return Err(CouplingError::Parameter(format!("need p <= m/M <= p′, got {p} <= {density} <= {p_prime}")));
    }
    let p_bar = if p < 1.0 { (1.0 - (1.0 - p_prime) / (1.0 - p)).clamp(0.0, 1.0) } else { 0.0 };
    let mut sample = sample_multistage(n, &[m], &[p], &[p_bar], rng)?;
    let h = sample.h.pop().expect("one stage");
    let mut h_prime = sample.h_bar.pop().expect("one stage");
    h_prime.union_with(&h);
    let g_hat = sample.h_hat.pop().expect("one stage");
    let ok = h.is_subgraph_of(&g_hat) && g_hat.is_subgraph_of(&h_prime);
    Ok(SandwichSample { h, g_hat, h_prime, ok })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn stage_sizes_and_disjointness() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let s = sample_multistage(6, &[3, 4, 2], &[0.15, 0.2, 0.1], &[0.1, 0.1, 0.1], &mut rng).unwrap();
            let mut used = Graph::empty(6);
            for (g, t) in s.h_hat.iter().zip([3, 4, 2]) {
                assert_eq!(g.edge_count(), t);
                assert_eq!(g.difference(&used).edge_count(), t);
                used.union_with(g);
            }
            if s.failure_step.is_none() {
                assert!(s.containments_hold());
            }
        }
    }

    #[test]
    fn sandwich_with_zero_lower_probability() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..100 {
            let s = sample_sandwich(5, 4, 0.0, 0.8, &mut rng).unwrap();
            assert_eq!(s.h.edge_count(), 0);
            assert!(s.h.is_subgraph_of(&s.g_hat));
            assert_eq!(s.ok, s.g_hat.is_subgraph_of(&s.h_prime));
        }
    }

    #[test]
    fn parameter_errors() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert!(sample_multistage(4, &[4, 4], &[0.1, 0.1], &[0.1, 0.1], &mut rng).is_err());
        assert!(sample_multistage(4, &[1], &[1.5], &[0.0], &mut rng).is_err());
        assert!(sample_multistage(4, &[1], &[0.1], &[], &mut rng).is_err());
        assert!(sample_sandwich(4, 3, 0.6, 0.9, &mut rng).is_err());
    }

    #[test]
    fn default_probabilities_straddle_the_density() {
        let (p, q) = default_probabilities(100, &[500, 1000]);
        for (i, t) in [500.0f64, 1000.0].iter().enumerate() {
            let base = t / 4950.0;
            assert!(p[i] < base && p[i] + q[i] - p[i] * q[i] < base + q[i]);
            assert!((p[i] + q[i] - base).abs() < 1e-12);
        }
    }
}
