use std::collections::BTreeMap;

use graph_core::{complete_edge_count, edge_index, Graph};
use process_engine::child_seed;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::multistage::{sample_multistage, sample_sandwich};
use crate::CouplingError;

/// Samples drawn from one child seed.
const CHUNK: usize = 1_000;

/// Largest vertex count for which edge sets fit the bitmask encoding.
const MAX_MASK_VERTICES: usize = 8;

/// Outcome of a chi-square goodness-of-fit validation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChiSquareReport {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    pub samples: usize,
    /// Outcomes with probability zero under the reference law.
    pub impossible: usize,
    /// Samples whose construction hit a failure event.
    pub failures: usize,
    /// Failure-free samples whose containments were checked.
    pub containment_checked: usize,
    pub containment_held: usize,
}

/// Edge set of `g` as a bitmask over edge indices.
pub fn graph_mask(g: &Graph) -> u32 {
    g.edges().fold(0, |mask, (u, v)| mask | 1 << edge_index(u, v))
}

/// Exact law of the stage split `(Ĥ_1, …, Ĥ_k)` of the random graph
/// process, keyed by the stage bitmasks. Obtained by enumerating every
/// ordered sequence of `Σ t_i` distinct edges.
pub fn exact_stage_law(n: usize, stage_lengths: &[usize]) -> Result<BTreeMap<Vec<u32>, f64>, CouplingError> {
    if n > MAX_MASK_VERTICES {
        return Err(CouplingError::Parameter(format!("exact laws need n <= {MAX_MASK_VERTICES}")));
    }
    let m = complete_edge_count(n);
    let total: usize = stage_lengths.iter().sum();
    if total > m {
        return Err(CouplingError::Parameter(format!("stage lengths sum to {total}, more than M = {m}")));
    }
    let mut counts: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
    let mut sequence = Vec::with_capacity(total);
    enumerate_sequences(m, total, &mut sequence, 0, &mut |seq| {
        let mut key = Vec::with_capacity(stage_lengths.len());
        let mut start = 0;
        for &t in stage_lengths {
            key.push(seq[start..start + t].iter().fold(0u32, |mask, &e| mask | 1 << e));
            start += t;
        }
        *counts.entry(key).or_default() += 1;
    });
    let sequences: u64 = counts.values().sum();
    Ok(counts.into_iter().map(|(k, c)| (k, c as f64 / sequences as f64)).collect())
}

fn enumerate_sequences(m: usize, len: usize, seq: &mut Vec<usize>, used: u32, visit: &mut dyn FnMut(&[usize])) {
    if seq.len() == len {
        visit(seq);
        return;
    }
    for e in 0..m {
        if used >> e & 1 == 0 {
            seq.push(e);
            enumerate_sequences(m, len, seq, used | 1 << e, visit);
            seq.pop();
        }
    }
}

/// Pearson statistic, degrees of freedom and upper-tail p-value of
/// `observed` against `probabilities` (which sum to one).
pub fn chi_square(observed: &[u64], probabilities: &[f64]) -> Result<(f64, usize, f64), CouplingError> {
    if observed.len() != probabilities.len() || observed.len() < 2 {
        return Err(CouplingError::Parameter("need at least two categories with matching lengths".into()));
    }
    let total: u64 = observed.iter().sum();
    let statistic: f64 = observed
        .iter()
        .zip(probabilities)
        .map(|(&o, &p)| {
            let e = p * total as f64;
            (o as f64 - e).powi(2) / e
        })
        .sum();
    let dof = observed.len() - 1;
    let dist = ChiSquared::new(dof as f64).map_err(|e| CouplingError::Parameter(e.to_string()))?;
    Ok((statistic, dof, dist.sf(statistic)))
}

struct Tally {
    counts: BTreeMap<Vec<u32>, u64>,
    failures: usize,
    checked: usize,
    held: usize,
}

impl Tally {
    fn new() -> Self {
        Tally { counts: BTreeMap::new(), failures: 0, checked: 0, held: 0 }
    }

    fn merge(mut self, other: Tally) -> Tally {
        for (k, c) in other.counts {
            *self.counts.entry(k).or_default() += c;
        }
        self.failures += other.failures;
        self.checked += other.checked;
        self.held += other.held;
        self
    }
}

fn run_chunks<F>(samples: usize, seed: u64, jobs: usize, draw: F) -> Result<Tally, CouplingError>
where
    F: Fn(&mut ChaCha8Rng, &mut Tally) -> Result<(), CouplingError> + Sync,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CouplingError::Parameter(format!("cannot start worker pool: {e}")))?;
    let chunks = samples.div_ceil(CHUNK);
    pool.install(|| {
        (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut rng = ChaCha8Rng::seed_from_u64(child_seed(seed, c as u64));
                let mut tally = Tally::new();
                for _ in 0..CHUNK.min(samples - c * CHUNK) {
                    draw(&mut rng, &mut tally)?;
                }
                Ok(tally)
            })
            .try_reduce(Tally::new, |a, b| Ok(a.merge(b)))
    })
}

fn report(tally: Tally, law: &BTreeMap<Vec<u32>, f64>, samples: usize) -> Result<ChiSquareReport, CouplingError> {
    let observed: Vec<u64> = law.keys().map(|k| tally.counts.get(k).copied().unwrap_or(0)).collect();
    let probabilities: Vec<f64> = law.values().copied().collect();
    let impossible = tally.counts.iter().filter(|(k, _)| !law.contains_key(*k)).map(|(_, &c)| c as usize).sum();
    let (statistic, dof, p_value) = chi_square(&observed, &probabilities)?;
    Ok(ChiSquareReport {
        statistic,
        dof,
        p_value: if impossible > 0 { 0.0 } else { p_value },
        samples,
        impossible,
        failures: tally.failures,
        containment_checked: tally.checked,
        containment_held: tally.held,
    })
}

/// Chi-square test of the multi-stage sampler's joint stage law against
/// the enumerated process law, with containment counts over failure-free
/// samples. The result depends on `seed` but not on `jobs`.
pub fn validate_multistage(
    n: usize,
    stage_lengths: &[usize],
    p: &[f64],
    p_bar: &[f64],
    samples: usize,
    seed: u64,
    jobs: usize,
) -> Result<ChiSquareReport, CouplingError> {
    let law = exact_stage_law(n, stage_lengths)?;
    let tally = run_chunks(samples, seed, jobs, |rng, tally| {
        let sample = sample_multistage(n, stage_lengths, p, p_bar, rng)?;
        if sample.failure_step.is_some() {
            tally.failures += 1;
        } else {
            tally.checked += 1;
            tally.held += usize::from(sample.containments_hold());
        }
        let key = sample.h_hat.iter().map(graph_mask).collect();
        *tally.counts.entry(key).or_default() += 1;
        Ok(())
    })?;
    report(tally, &law, samples)
}

/// Chi-square test of the sandwich sampler's `Ĝ` against the uniform law
/// on `m`-edge graphs; containment counts record `ok`.
pub fn validate_sandwich_marginal(
    n: usize,
    m: usize,
    p: f64,
    p_prime: f64,
    samples: usize,
    seed: u64,
    jobs: usize,
) -> Result<ChiSquareReport, CouplingError> {
    let law = exact_stage_law(n, &[m])?;
    let tally = run_chunks(samples, seed, jobs, |rng, tally| {
        let sample = sample_sandwich(n, m, p, p_prime, rng)?;
        tally.checked += 1;
        tally.held += usize::from(sample.ok);
        if !sample.ok {
            tally.failures += 1;
        }
        *tally.counts.entry(vec![graph_mask(&sample.g_hat)]).or_default() += 1;
        Ok(())
    })?;
    report(tally, &law, samples)
}
