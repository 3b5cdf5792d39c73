use bounds_analytics::{
    budget_exponent, budget_exponent_exact, copy_count_statistic, curve_table, BoundFamily, BoundKind, BoundSpec,
};
use graph_core::sample_process_prefix;
use num_rational::Rational64;
use pattern_tools::complete_pattern;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn lower(family: BoundFamily) -> BoundSpec {
    BoundSpec::new(family, BoundKind::LowerBound).unwrap()
}

#[test]
fn clique_lines_start_on_the_diagonal_and_meet_at_two_one() {
    for r in 3..=7i64 {
        let spec = lower(BoundFamily::CliqueFactor(r as usize));
        let start = Rational64::new(2 * r - 2, r);
        assert_eq!(spec.valid_range().0, start);
        assert_eq!(budget_exponent_exact(&spec, start).unwrap(), start);
        assert_eq!(budget_exponent_exact(&spec, Rational64::from_integer(2)).unwrap(), Rational64::from_integer(1));
    }
}

#[test]
fn cycle_power_lines_start_on_the_diagonal_and_meet_at_two_one() {
    for k in 2..=5i64 {
        let spec = lower(BoundFamily::HamPower(k as usize));
        let start = Rational64::new(2 * k - 1, k);
        assert_eq!(budget_exponent_exact(&spec, start).unwrap(), start);
        assert_eq!(budget_exponent_exact(&spec, Rational64::from_integer(2)).unwrap(), Rational64::from_integer(1));
    }
}

#[test]
fn clique_formula_is_the_general_formula_at_half_r() {
    for r in 2..=7i64 {
        let clique = lower(BoundFamily::CliqueFactor(r as usize));
        let general = lower(BoundFamily::FFactor {
            d_star: Rational64::new(r, 2),
            vertices: r as usize,
            strictly_balanced: true,
        });
        let (lo, hi) = clique.valid_range();
        for i in 0..50i64 {
            let x = lo + (hi - lo) * Rational64::new(i, 49);
            assert_eq!(budget_exponent_exact(&clique, x).unwrap(), budget_exponent_exact(&general, x).unwrap());
        }
    }
    let triangle = BoundFamily::f_factor(&complete_pattern(3)).unwrap();
    assert_eq!(lower(triangle).valid_range(), lower(BoundFamily::CliqueFactor(3)).valid_range());
}

#[test]
fn curve_csv_contains_the_figure_endpoints() {
    let specs: Vec<BoundSpec> = (3..=7).map(|r| lower(BoundFamily::CliqueFactor(r))).collect();
    let grid: Vec<f64> = [4.0 / 3.0, 1.5, 1.6, 5.0 / 3.0, 12.0 / 7.0, 2.0].to_vec();
    let csv = curve_table(&specs, None, &grid);
    assert!(csv.contains("clique_factor,3,1.333333,1.333333,lower_bound"));
    assert!(csv.contains("clique_factor,5,1.600000,1.600000,lower_bound"));
    assert!(csv.contains("clique_factor,7,1.714286,1.714286,lower_bound"));
    assert_eq!(csv.lines().filter(|l| l.contains(",2.000000,1.000000,")).count(), 5);
}

#[test]
fn buy_all_triangle_counts_stay_below_the_bound() {
    let n = 200;
    let t = (n as f64).powf(1.5).ceil() as usize;
    let bought = sample_process_prefix(n, t, &mut ChaCha8Rng::seed_from_u64(3)).unwrap().to_graph();
    let report = copy_count_statistic(&bought, &complete_pattern(3), t, t, 100.0, 0.05).unwrap();
    assert!(report.fraction_below >= 0.95, "{report:?}");
    assert!(report.minimal_lambda <= 100.0);
}

proptest! {
    #[test]
    fn exponents_are_non_increasing(r in 2usize..9, k in 2usize..7, a in 0.0f64..1.0, b in 0.0f64..1.0) {
        for spec in [lower(BoundFamily::CliqueFactor(r)), lower(BoundFamily::HamPower(k))] {
            let (lo, hi) = spec.valid_range();
            let (lo, hi) = (*lo.numer() as f64 / *lo.denom() as f64, *hi.numer() as f64 / *hi.denom() as f64);
            let (x, y) = (lo + (hi - lo) * a.min(b), lo + (hi - lo) * a.max(b));
            prop_assert!(budget_exponent(&spec, y).unwrap() <= budget_exponent(&spec, x).unwrap() + 1e-12);
        }
    }
}
