use graph_core::complete_edge_count;
use pattern_tools::{density_to_string, Density};
use serde::{Deserialize, Serialize};

use crate::absorber::{build_absorber_template, spine_length};
use crate::linkage::DEFAULT_LINKAGE_BUDGET;
use crate::HamError;

/// User-facing knobs of the four-stage strategy.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HamPowerConfig {
    pub n: usize,
    pub t: usize,
    pub k: usize,
    /// Budget slack `ε` in `b = n^{2k-1+ε} / t^{k-1}`.
    pub epsilon: f64,
    /// The `δ` of the part-count formula for Stage I and Stage III.
    pub delta_prime: f64,
    pub j: usize,
    pub ell: usize,
    pub q: usize,
    pub r: usize,
    /// Constant in front of the Stage I part count.
    pub stage1_constant: f64,
    /// Constant in front of the Stage III part count.
    pub stage3_constant: f64,
    /// Stage IV threshold as a multiple of `p̂ ζ`; `None` means `2 / ln n`.
    pub threshold_multiple: Option<f64>,
    /// Replaces the formula value of `ξ` (still clamped to its valid range).
    pub xi_override: Option<usize>,
    pub linkage_budget: u64,
    /// Node budget of each template-factor search in Stages I and III.
    pub factor_budget: u64,
}

impl HamPowerConfig {
    /// Defaults for everything except the problem size and gadget sizes.
    pub fn new(n: usize, t: usize, k: usize, j: usize, ell: usize, q: usize, r: usize) -> Self {
        HamPowerConfig {
            n,
            t,
            k,
            epsilon: 0.5,
            delta_prime: 1.0 / 3.0,
            j,
            ell,
            q,
            r,
            stage1_constant: 1.0,
            stage3_constant: 1.0,
            threshold_multiple: None,
            xi_override: None,
            linkage_budget: DEFAULT_LINKAGE_BUDGET,
            factor_budget: 2_000_000,
        }
    }
}

/// Every derived quantity of the strategy.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HamPowerParams {
    pub config: HamPowerConfig,
    pub s: usize,
    pub absorber_density: String,
    pub absorber_density_value: f64,
    pub path_density: String,
    pub eta: usize,
    pub nu: usize,
    pub xi: usize,
    pub xi_formula: f64,
    pub pi: usize,
    pub pi_formula: f64,
    pub sigma: usize,
    pub sigma_formula: f64,
    /// Steps per stage, `⌊t/4⌋`.
    pub stage_steps: usize,
    pub u1_size: usize,
    pub u2_size: usize,
    pub u3_size: usize,
    /// `⌊η / ξ⌋`, the size of each Stage IV set `Y_a`.
    pub zeta: usize,
    /// Edge density of the first three stages together, `3 t_i / M`.
    pub stage4_prior_density: f64,
    pub threshold: usize,
    /// `2 χ p̂ ζ` with `χ = 1 / ln^5 n`, logged for comparison.
    pub threshold_reference: f64,
    pub budget_formula: f64,
    pub budget: usize,
}

pub(crate) fn is_prime(q: usize) -> bool {
    q >= 2 && (2..).take_while(|d| d * d <= q).all(|d| q % d != 0)
}

/// `d*` of the `k`-th power of a path on `q` vertices, `(kq - k(k+1)/2) / (q-1)`.
///
/// Any `m` vertices of a path power span at most `km - k(k+1)/2` edges and
/// this grows faster than `m - 1`, so the whole graph is the densest.
pub fn path_power_max_density(q: usize, k: usize) -> Density {
    let k = k.min(q.saturating_sub(1));
    let edges = k * q - k * (k + 1) / 2;
    Density::new(edges as i64, q as i64 - 1)
}

fn ratio(d: Density) -> f64 {
    *d.numer() as f64 / *d.denom() as f64
}

fn clamp_floor(value: f64, lo: usize, hi: usize) -> usize {
    let v = if value.is_finite() { value.floor().max(0.0) } else { 0.0 };
    (v.min(hi as f64) as usize).clamp(lo, hi.max(lo))
}

/// Validates the configuration and derives the stage parameters.
pub fn derive_params(config: &HamPowerConfig) -> Result<HamPowerParams, HamError> {
    let &HamPowerConfig { n, t, k, epsilon, delta_prime, j, ell, q, r, .. } = config;
    let bad = |what: String| Err(HamError::Parameter(what));
    if t > complete_edge_count(n) {
        return bad(format!("t = {t} exceeds the number of vertex pairs"));
    }
    if !(epsilon > 0.0 && epsilon.is_finite()) || !(delta_prime > 0.0 && delta_prime.is_finite()) {
        return bad("epsilon and delta_prime must be positive".into());
    }
    if !(config.stage1_constant > 0.0) || !(config.stage3_constant > 0.0) {
        return bad("stage constants must be positive".into());
    }
    let template = build_absorber_template(j, ell, k)?;
    let s = spine_length(j, ell);
    if !is_prime(q) || q <= s + 1 + r {
        return bad(format!("q = {q} must be a prime greater than s + 1 + r = {}", s + 1 + r));
    }
    let top = n / (3 * (s + 1));
    let low = (top + 1).saturating_sub(q).max(1);
    let eta = (low..=top).rev().find(|&eta| {
        let used = eta * (s + 1) + (eta - 1) * r;
        used < n && (n - used) % q == 0
    });
    let Some(eta) = eta else {
        return bad(format!("no η in {low}..={top} makes n - η(s+1) - (η-1)r a positive multiple of q = {q}"));
    };
    let nu = (n - eta * (s + 1) - (eta - 1) * r) / q;
    let u1_size = eta * (s + 1);
    let u2_size = n / 3;
    if (eta - 1) * r > u2_size {
        return bad(format!("U_2 has {u2_size} vertices, fewer than the {} Stage II linkage vertices", (eta - 1) * r));
    }

    let nf = n as f64;
    let tf = t as f64;
    let m = complete_edge_count(n) as f64;
    let stage_steps = t / 4;
    let p_stage = stage_steps as f64 / m;

    let xi_formula = (tf / (nf * nf)).powf(k as f64 / (1.0 - epsilon / 2.0)) * nf;
    // ξ groups need a pair each in Stage II and a vertex set of size at
    // least one in Stage IV.
    let xi_cap = eta.saturating_sub(1).max(1).min(nu + 1).min(eta);
    let xi = clamp_floor(config.xi_override.map_or(xi_formula, |x| x as f64), 1, xi_cap);

    let absorber_density = template.max_one_density()?;
    let d1 = ratio(absorber_density);
    let pi_formula = config.stage1_constant * p_stage.powf(d1) * (u1_size as f64).powf(1.0 - delta_prime * d1 / 2.0);
    let pi = clamp_floor(pi_formula, 1, eta);

    let path_density = path_power_max_density(q, k);
    let d3 = ratio(path_density);
    let u3_size = nu * q;
    let sigma_formula =
        config.stage3_constant * p_stage.powf(d3) * (u3_size as f64).powf(1.0 - delta_prime * d3 / 2.0);
    let sigma = clamp_floor(sigma_formula, 1, nu.max(1));

    let zeta = eta / xi;
    let stage4_prior_density = 3.0 * p_stage;
    let multiple = config.threshold_multiple.unwrap_or(2.0 / nf.ln());
    if !(multiple >= 0.0) {
        return bad("threshold_multiple must be non-negative".into());
    }
    let threshold = (multiple * stage4_prior_density * zeta as f64).floor() as usize;
    let threshold_reference = 2.0 * stage4_prior_density * zeta as f64 / nf.ln().powi(5);

    let budget_formula = nf.powf(2.0 * k as f64 - 1.0 + epsilon) / tf.max(1.0).powf(k as f64 - 1.0);
    let budget = if budget_formula >= usize::MAX as f64 { usize::MAX } else { budget_formula.floor() as usize };

    Ok(HamPowerParams {
        config: config.clone(),
        s,
        absorber_density: density_to_string(absorber_density),
        absorber_density_value: d1,
        path_density: density_to_string(path_density),
        eta,
        nu,
        xi,
        xi_formula,
        pi,
        pi_formula,
        sigma,
        sigma_formula,
        stage_steps,
        u1_size,
        u2_size,
        u3_size,
        zeta,
        stage4_prior_density,
        threshold,
        threshold_reference,
        budget_formula,
        budget,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        let small: Vec<usize> = (0..30).filter(|&q| is_prime(q)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }

    #[test]
    fn eta_window_example() {
        let config = HamPowerConfig::new(10_000, 1_000_000, 2, 3, 4, 47, 3);
        let p = derive_params(&config).unwrap();
        assert_eq!(p.s, 40);
        let top = 10_000 / (3 * 41);
        assert!(p.eta <= top && p.eta + 47 > top);
        assert_eq!((10_000 - p.eta * 41 - (p.eta - 1) * 3) % 47, 0);
        assert_eq!(p.eta * 41 + (p.eta - 1) * 3 + p.nu * 47, 10_000);
    }

    #[test]
    fn xi_matches_formula_when_in_range() {
        let mut config = HamPowerConfig::new(10_000, 1_000_000, 2, 3, 4, 47, 3);
        config.epsilon = 0.5;
        let p = derive_params(&config).unwrap();
        let expected = ((1_000_000f64 / 1e8).powf(2.0 / 0.75) * 10_000.0).floor() as usize;
        assert_eq!(p.xi, expected.clamp(1, p.eta - 1));
    }

    #[test]
    fn path_power_density() {
        assert_eq!(path_power_max_density(5, 2), Density::new(7, 4));
        let exact = pattern_tools::max_one_density(&pattern_tools::path_power(7, 3)).unwrap();
        assert_eq!(path_power_max_density(7, 3), exact);
    }

    #[test]
    fn rejects_bad_q() {
        assert!(derive_params(&HamPowerConfig::new(10_000, 1_000_000, 2, 3, 4, 43, 3)).is_err());
        assert!(derive_params(&HamPowerConfig::new(10_000, 1_000_000, 2, 3, 4, 49, 3)).is_err());
    }
}
