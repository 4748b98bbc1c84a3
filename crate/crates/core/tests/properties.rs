use proptest::prelude::*;

use lowdisc::bounds::{cover_constant_pipeline, inverse_sqrt_bound, sqrt_bound, C_STAR};
use lowdisc::discrepancy::{
    extreme_disc_1d, scaled_series, star_disc_1d, star_disc_exact, star_disc_oracle, star_disc_ta, DiscMethod, TaParams,
};
use lowdisc::padic::{crt_count_range, meijer_transfer_bound, padic_discrepancy, relabelled_values};
use lowdisc::rng::SplitMix64;
use lowdisc::search::{greedy_search, random_permutation_zero_fixed, SearchBudget};
use lowdisc::sequence::{generate_point_set, hammersley_lift};
use lowdisc::{HammersleyConvention, PermPolynomial, Permutation, PointSet, Rational, ScrambleConfig};

const PRIMES: [u32; 10] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29];

fn scrambled(p: u32, shift: u64, seed: u64) -> ScrambleConfig {
    let mut rng = SplitMix64::new(seed);
    ScrambleConfig::van_der_corput(p, shift, random_permutation_zero_fixed(p, &mut rng)).unwrap()
}

fn coprime_shift(p: u32, raw: u64) -> u64 {
    if raw.is_multiple_of(u64::from(p)) {
        raw + 1
    } else {
        raw
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exact_agrees_with_oracle(d in 1usize..4, n in 1usize..7, seed in any::<u64>()) {
        let mut rng = SplitMix64::new(seed);
        let coords: Vec<f64> = (0..n * d).map(|_| rng.below(7) as f64 / 7.0).collect();
        let ps = PointSet::from_flat(d, coords).unwrap();
        let e = star_disc_exact(&ps).unwrap();
        let o = star_disc_oracle(&ps).unwrap();
        prop_assert!((e.value - o.value).abs() <= 1e-12);
    }

    #[test]
    fn estimate_never_exceeds_exact(d in 2usize..4, n in 1usize..20, seed in any::<u64>()) {
        let mut rng = SplitMix64::new(seed);
        let coords: Vec<f64> = (0..n * d).map(|_| rng.next_f64()).collect();
        let ps = PointSet::from_flat(d, coords).unwrap();
        let params = TaParams { iterations: 500, restarts: 2, ..TaParams::default() }.with_seed(seed);
        let ta = star_disc_ta(&ps, &params).unwrap();
        prop_assert!(!ta.is_exact);
        prop_assert!(ta.value <= star_disc_exact(&ps).unwrap().value + 1e-12);
    }

    #[test]
    fn one_dim_lower_bound_and_sandwich(v in proptest::collection::vec(0.0f64..1.0, 1..50)) {
        let n = v.len() as f64;
        let ps = PointSet::one_dim(v).unwrap();
        let star = star_disc_1d(&ps).unwrap().value;
        let ext = extreme_disc_1d(&ps).unwrap().value;
        prop_assert!(star >= 0.5 / n - 1e-15);
        prop_assert!(star <= ext + 1e-15 && ext <= 2.0 * star + 1e-15);
    }

    #[test]
    fn generated_points_are_half_open(pi in 0usize..10, raw in 1u64..200, seed in any::<u64>(), n in 1usize..300) {
        let p = PRIMES[pi];
        let cfg = scrambled(p, coprime_shift(p, raw), seed);
        let ps = generate_point_set(&cfg, n).unwrap();
        prop_assert_eq!(ps.len(), n);
        prop_assert!(ps.check_half_open().is_ok());
    }

    #[test]
    fn padic_discrepancy_is_one_over_n_for_shifted_indices(
        pi in 0usize..6, raw in 1u64..40, seed in any::<u64>(), n in 1usize..400,
    ) {
        let p = PRIMES[pi];
        let a = coprime_shift(p, raw);
        let mut rng = SplitMix64::new(seed);
        let perm = random_permutation_zero_fixed(p, &mut rng);
        let values = relabelled_values(&PermPolynomial::affine(a as i64, 0), &perm, u64::from(p), n).unwrap();
        let r = padic_discrepancy(&values, u64::from(p)).unwrap();
        prop_assert_eq!(r.value, Rational::new(1, n as i128));
    }

    #[test]
    fn padic_discrepancy_is_at_least_one_over_n(values in proptest::collection::vec(0u64..10_000, 1..60), pi in 0usize..5) {
        let n = values.len() as i128;
        let r = padic_discrepancy(&values, u64::from(PRIMES[pi])).unwrap();
        prop_assert!(r.value >= Rational::new(1, n));
    }

    #[test]
    fn crt_spread_is_at_most_one(a in 1u64..50, b in 1u64..50, k1 in 0u32..4, k2 in 0u32..3, n in 1usize..3000) {
        let shifts = [coprime_shift(2, a), coprime_shift(3, b)];
        let (lo, hi) = crt_count_range(&shifts, &[2, 3], &[k1, k2], n).unwrap();
        prop_assert!(hi - lo <= 1);
    }

    #[test]
    fn transfer_bound_dominates_extreme_discrepancy(pi in 0usize..10, raw in 1u64..100, seed in any::<u64>(), n in 2usize..2000) {
        let p = PRIMES[pi];
        let cfg = scrambled(p, coprime_shift(p, raw), seed);
        let measured = extreme_disc_1d(&generate_point_set(&cfg, n).unwrap()).unwrap().value;
        prop_assert!(meijer_transfer_bound(1.0 / n as f64, u64::from(p)).unwrap() >= measured);
    }

    #[test]
    fn inverse_sqrt_bound_is_minimal(eps in 0.01f64..1.0, d in 1u32..200) {
        let n = inverse_sqrt_bound(C_STAR, d, eps).unwrap();
        prop_assert!(sqrt_bound(C_STAR, d, n).unwrap() <= eps * (1.0 + 1e-12));
        if n > 1 {
            prop_assert!(sqrt_bound(C_STAR, d, n - 1).unwrap() > eps);
        }
    }

    #[test]
    fn cover_pipeline_is_self_consistent(d in 5u32..2000, mu in 2u32..30) {
        let p = cover_constant_pipeline(mu, d).unwrap();
        prop_assert!(p.consistency_error() <= 1e-12);
    }

    #[test]
    fn config_json_round_trip(pi in 0usize..10, raw in 1u64..1000, seed in any::<u64>(), start in 0u64..5) {
        let p = PRIMES[pi];
        let cfg = scrambled(p, coprime_shift(p, raw), seed).with_start_index(start);
        prop_assert_eq!(ScrambleConfig::from_json(&cfg.to_json()).unwrap(), cfg);
    }

    #[test]
    fn series_ends_with_scaled_discrepancy(pi in 0usize..4, raw in 1u64..50, n_max in 2usize..300) {
        let p = PRIMES[pi];
        let cfg = ScrambleConfig::van_der_corput(p, coprime_shift(p, raw), Permutation::identity(p)).unwrap();
        let s = scaled_series(&cfg, n_max).unwrap();
        prop_assert_eq!(s.len(), n_max - 1);
        let nf = n_max as f64;
        let direct = star_disc_1d(&generate_point_set(&cfg, n_max).unwrap()).unwrap().value * nf / nf.ln();
        let (n, v) = *s.last().unwrap();
        prop_assert_eq!(n, n_max);
        prop_assert!((v - direct).abs() <= 1e-9);
    }
}

#[test]
fn hammersley_first_coordinate_is_equispaced() {
    let cfg = ScrambleConfig::van_der_corput(2, 509, Permutation::identity(2)).unwrap();
    let indexed = hammersley_lift(&cfg, 20, HammersleyConvention::Indexed).unwrap();
    let classic = hammersley_lift(&cfg, 20, HammersleyConvention::Classic).unwrap();
    assert_eq!(indexed.len(), 19);
    assert_eq!(classic.len(), 20);
    for (i, p) in indexed.points().enumerate() {
        assert_eq!(p[0], (i + 1) as f64 / 20.0);
    }
    for (i, p) in classic.points().enumerate() {
        assert_eq!(p[0], i as f64 / 20.0);
    }
}

#[test]
fn greedy_search_is_deterministic_and_beats_baseline() {
    let budget = SearchBudget::new(vec![6, 6, 6], vec![3, 3, 3], 42).unwrap();
    let a = greedy_search(&[2, 3, 5], 40, &budget, &DiscMethod::Exact).unwrap();
    let b = greedy_search(&[2, 3, 5], 40, &budget, &DiscMethod::Exact).unwrap();
    assert_eq!(a, b);
    let base = star_disc_exact(&generate_point_set(&ScrambleConfig::halton(&[2, 3, 5]).unwrap(), 40).unwrap()).unwrap();
    assert!(a.value <= base.value);
    let again = star_disc_exact(&generate_point_set(&a.config, 40).unwrap()).unwrap();
    assert_eq!(again.value, a.value);
}
