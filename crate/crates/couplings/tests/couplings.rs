use couplings::{
    check_fkg_exact, fkg_catalogue_pairs, sample_multistage, sample_sandwich, validate_multistage,
    validate_sandwich_marginal,
};
use num_rational::Rational64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn multistage_law_matches_the_process_at_four_vertices() {
    let report = validate_multistage(4, &[2, 2], &[0.3, 0.3], &[0.05, 0.05], 100_000, 2024, 0).unwrap();
    assert_eq!(report.dof, 89);
    assert_eq!(report.impossible, 0);
    assert_eq!(report.containment_checked, report.containment_held);
    assert!(report.containment_checked > 0);
    assert!(report.p_value > 0.01, "{report:?}");
    let json = serde_json::to_value(&report).unwrap();
    assert!(json.get("p_value").is_some() && json.get("containment_held").is_some());
}

#[test]
fn sandwich_marginal_is_uniform() {
    let report = validate_sandwich_marginal(4, 3, 0.3, 0.7, 20_000, 7, 0).unwrap();
    assert_eq!(report.dof, 19);
    assert!(report.p_value > 0.01, "{report:?}");
}

#[test]
fn catalogued_pairs_satisfy_fkg_exactly() {
    let pairs = fkg_catalogue_pairs();
    assert_eq!(pairs.len(), 10);
    for (f, g) in &pairs {
        for n in [3, 4] {
            for p in [Rational64::new(1, 4), Rational64::new(1, 2)] {
                let report = check_fkg_exact(n, p, &f.eval, &g.eval).unwrap();
                assert!(report.holds, "{f:?} {g:?} n={n} p={p}: {report:?}");
            }
        }
    }
}

#[test]
fn failures_become_rarer_as_p_approaches_the_stage_density() {
    let (n, t, p_bar, samples) = (30, 100, 0.05, 2_000);
    let rates: Vec<f64> = [0.10, 0.15, 0.20]
        .iter()
        .map(|&p| {
            let mut rng = ChaCha8Rng::seed_from_u64(31);
            let failures = (0..samples)
                .filter(|_| sample_multistage(n, &[t], &[p], &[p_bar], &mut rng).unwrap().failure_step.is_some())
                .count();
            failures as f64 / samples as f64
        })
        .collect();
    for w in rates.windows(2) {
        let sigma = ((w[0] * (1.0 - w[0]) + w[1] * (1.0 - w[1])) / samples as f64).sqrt();
        assert!(w[0] - w[1] > 3.0 * sigma.max(1e-3), "{rates:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn failure_free_samples_satisfy_containments(
        seed: u64,
        t1 in 0usize..6,
        t2 in 0usize..6,
        p in 0.0f64..0.6,
        q in 0.0f64..0.6,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = sample_multistage(6, &[t1, t2], &[p, p], &[q, q], &mut rng).unwrap();
        prop_assert_eq!(s.h_hat[0].edge_count(), t1);
        prop_assert_eq!(s.h_hat[1].edge_count(), t2);
        if s.failure_step.is_none() {
            prop_assert!(s.containments_hold());
        }
    }

    #[test]
    fn sandwich_ok_means_both_containments(seed: u64, m in 0usize..10) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let density = m as f64 / 10.0;
        let s = sample_sandwich(5, m, density * 0.8, (density * 1.2).min(1.0), &mut rng).unwrap();
        prop_assert_eq!(s.g_hat.edge_count(), m);
        if s.ok {
            prop_assert!(s.h.is_subgraph_of(&s.g_hat) && s.g_hat.is_subgraph_of(&s.h_prime));
        }
    }
}
