use std::sync::Arc;

use graph_core::{complete_edge_count, sample_gnp, Graph, VertexSet};
use ham_power::{
    derive_params, find_linkage_family, run_ham_power_batch, satisfies_threshold, sparse_partition_match,
    verify_trace, EndsequencePair, HamPowerConfig, Setup, StageMachine,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use structure_checkers::verify_ham_power;

/// Eight 41-vertex absorbers, one path power on 643 vertices, linkages of
/// length 2: n = 8·41 + 7·2 + 643.
fn roomy_config() -> HamPowerConfig {
    let n = 985;
    let mut config = HamPowerConfig::new(n, complete_edge_count(n) / 2, 2, 3, 4, 643, 2);
    config.threshold_multiple = Some(1e9);
    config.xi_override = Some(1);
    config
}

fn run_machine(setup: &Arc<Setup>, bought: &Graph, prior: &Graph) -> StageMachine {
    let mut machine = StageMachine::new(Arc::clone(setup));
    let prior = prior.clone();
    while machine.stage() <= 4 {
        machine.end_stage(bought, &|| prior.clone()).unwrap();
    }
    machine
}

#[test]
fn derived_layout_of_roomy_config() {
    let params = derive_params(&roomy_config()).unwrap();
    assert_eq!((params.eta, params.nu, params.s), (8, 1, 40));
    assert_eq!(params.u1_size + params.u3_size + (params.eta - 1) * 2, 985);
}

#[test]
fn all_stages_succeed_on_a_complete_host() {
    let setup = Setup::new(derive_params(&roomy_config()).unwrap()).unwrap();
    let host = Graph::complete(985);
    let machine = run_machine(&setup, &host, &host);
    assert!(machine.log().iter().all(|r| r.success), "{:?}", machine.log());
    let trace = machine.trace();
    let order = trace.order.as_ref().unwrap();
    assert!(verify_ham_power(&host, order, 2).unwrap());
    let presented: Vec<_> = host.edges().collect();
    let verdicts = verify_trace(&setup, trace, &host, &presented);
    assert_eq!(verdicts.len(), 5);
    assert!(verdicts.iter().all(|v| v.verified.is_ok()), "{verdicts:?}");
}

#[test]
fn all_stages_succeed_on_a_dense_random_host() {
    let setup = Setup::new(derive_params(&roomy_config()).unwrap()).unwrap();
    let host = sample_gnp(985, 0.8, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
    let machine = run_machine(&setup, &host, &Graph::empty(985));
    assert!(machine.log().iter().all(|r| r.success), "{:?}", machine.log());
    let order = machine.trace().order.as_ref().unwrap();
    assert_eq!(order.len(), 985);
    assert!(verify_ham_power(&host, order, 2).unwrap());
    let verdicts = verify_trace(&setup, machine.trace(), &host, &[]);
    assert!(verdicts.iter().all(|v| v.verified.is_ok()), "{verdicts:?}");
}

#[test]
fn empty_host_fails_at_stage_one_and_skips_the_rest() {
    let setup = Setup::new(derive_params(&roomy_config()).unwrap()).unwrap();
    let machine = run_machine(&setup, &Graph::empty(985), &Graph::empty(985));
    let log = machine.log();
    assert_eq!(log.len(), 4);
    assert!(log.iter().all(|r| !r.success));
    assert!(log[1].detail.contains("skipped"));
    assert!(machine.trace().order.is_none());
}

#[test]
fn verifier_rejects_a_corrupted_trace() {
    let setup = Setup::new(derive_params(&roomy_config()).unwrap()).unwrap();
    let host = sample_gnp(985, 0.8, &mut ChaCha8Rng::seed_from_u64(6)).unwrap();
    let machine = run_machine(&setup, &host, &Graph::empty(985));
    let mut trace = machine.trace().clone();
    trace.absorbers[0].spine.swap(5, 30);
    trace.stage4_linkages[0].internal.reverse();
    trace.paths[0].swap(0, 300);
    let verdicts = verify_trace(&setup, &trace, &host, &[]);
    assert!(verdicts.iter().filter(|v| v.verified.is_err()).count() >= 3, "{verdicts:?}");
}

#[test]
fn process_trials_are_structurally_sound() {
    let n = 985;
    let mut config = roomy_config();
    config.t = complete_edge_count(n);
    config.factor_budget = 200_000;
    let setup = Setup::new(derive_params(&config).unwrap()).unwrap();
    let trials = run_ham_power_batch(&setup, 3, 11, 0).unwrap();
    for trial in &trials {
        assert!(trial.sound(), "{:?}", trial.verdicts);
        assert!(trial.outcome.errored.is_none());
        assert!(trial.outcome.budget_used <= setup.params.budget);
        if trial.outcome.success {
            assert!(trial.verdicts.iter().any(|v| v.stage == "cycle"));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn partition_output_meets_threshold(seed: u64, p in 0.0f64..0.6, threshold in 0usize..4) {
        let g = sample_gnp(60, p, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let xs: Vec<Vec<usize>> = (0..9).map(|i| vec![2 * i, 2 * i + 1]).collect();
        let ys: Vec<Vec<usize>> = (0..3).map(|a| (40 + 4 * a..44 + 4 * a).collect()).collect();
        if let Some(groups) = sparse_partition_match(&g, &xs, &ys, threshold).unwrap() {
            prop_assert!(satisfies_threshold(&g, &xs, &ys, &groups, threshold));
            prop_assert!(groups.iter().all(|j| j.len() == 3));
        }
    }

    #[test]
    fn found_linkages_verify(seed: u64, p in 0.3f64..1.0, r in 0usize..4) {
        let g = sample_gnp(40, p, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let family = vec![EndsequencePair::new(vec![0, 1], vec![2, 3]), EndsequencePair::new(vec![4, 5], vec![6, 7])];
        let allowed = VertexSet::from_iter_with_capacity(40, 8..40);
        if let Some(ls) = find_linkage_family(&g, &family, r, &allowed, 100_000).unwrap().found() {
            let mut inner: Vec<usize> = ls.iter().flat_map(|l| l.internal.clone()).collect();
            inner.sort_unstable();
            inner.dedup();
            prop_assert_eq!(inner.len(), 2 * r);
            for l in &ls {
                prop_assert!(l.verify(&g, r, &allowed).is_ok());
                for (x, y) in l.edges() {
                    prop_assert!(!(l.pair.a.contains(&x) && l.pair.a.contains(&y)));
                    prop_assert!(!(l.pair.b.contains(&x) && l.pair.b.contains(&y)));
                }
            }
        }
    }
}
