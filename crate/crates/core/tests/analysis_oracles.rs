mod common;

use common::{dft_errors, periodic_series};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rfr_core::analysis::{
    amplitude_spectrum, classify_orbit, count_distinct_points, expected_entropy, poincare_points, shannon_entropy,
    OrbitKind, DEFAULT_BINS, DEFAULT_MAX_PERIOD, DEFAULT_REL_TOL,
};
use rfr_core::sweep::{ic_map, IcMapSpec};
use rfr_core::{GridSpec, ModelParams, RunSchedule, StroboSeries};

#[test]
fn spectrum_matches_brute_force_on_random_series() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for case in 0..50 {
        let n = if case % 2 == 0 { 64 } else { 100 };
        let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let s = amplitude_spectrum(&x).unwrap();
        let (dev, parseval) = dft_errors(&x, &s.amplitudes);
        assert!(dev < 1e-12, "case {case}: deviation {dev}");
        assert!(parseval < 1e-10, "case {case}: Parseval residual {parseval}");
    }
}

#[test]
fn spectrum_of_pure_tone() {
    let n = 128;
    let x: Vec<f64> = (0..n)
        .map(|j| 0.5 + 0.25 * (2.0 * std::f64::consts::PI * 5.0 * j as f64 / n as f64).cos())
        .collect();
    let s = amplitude_spectrum(&x).unwrap();
    assert!((s.amplitudes[0] - 0.5).abs() < 1e-14);
    assert!((s.amplitudes[5] - 0.125).abs() < 1e-14);
    assert!((s.amplitudes[n - 5] - 0.125).abs() < 1e-14);
    assert_eq!(s.harmonics_above(0.01), 1);
}

#[test]
fn entropy_equals_log2_of_period() {
    for m in [1usize, 2, 3, 4, 8] {
        let x = periodic_series(m, 480);
        let e = shannon_entropy(&x, DEFAULT_BINS).unwrap();
        assert!(
            (e.entropy - expected_entropy(m)).abs() < 1e-12,
            "M = {m}: {}",
            e.entropy
        );
        assert_eq!(e.occupied_bins, m);
        let c = classify_orbit(&x, DEFAULT_REL_TOL, DEFAULT_MAX_PERIOD).unwrap();
        assert_eq!(c.period, m);
        let expected_kind = if m == 1 {
            OrbitKind::Stationary
        } else {
            OrbitKind::Periodic
        };
        assert_eq!(c.kind, expected_kind);
    }
    let e3 = shannon_entropy(&periodic_series(3, 480), DEFAULT_BINS).unwrap().entropy;
    assert_eq!(format!("{e3:.3}"), "1.585");
}

#[test]
fn poincare_points_of_a_cycle() {
    let x = periodic_series(4, 64);
    let s = StroboSeries {
        theta_out: x.iter().map(|a| 0.5 * a).collect(),
        tau: (1..=64).map(|k| k as f64).collect(),
        alpha_out: x,
        params: ModelParams::default(),
        ic: (0.9, 0.2),
    };
    let pts = poincare_points(&s);
    assert_eq!(pts.len(), 64);
    assert_eq!(count_distinct_points(&pts, DEFAULT_REL_TOL), 4);
}

#[test]
fn ic_map_without_reaction_is_stationary_everywhere() {
    let base = ModelParams {
        da: 0.0,
        tau_r: 1.0,
        ..Default::default()
    };
    let grid = GridSpec::new(41).unwrap();
    let mut spec = IcMapSpec::new(base);
    spec.grid = grid;
    spec.alpha0_range = (0.0, 0.8);
    spec.n_alpha = 3;
    spec.n_theta = 3;
    spec.schedule = RunSchedule {
        n_transient: 30,
        n_record: 16,
        dt_target: base.stable_dt(&grid),
    };
    let r = ic_map(&spec, 2).unwrap();
    assert_eq!(r.rows.len(), 9);
    for row in &r.rows {
        let (c, e) = row.outcome.as_ref().unwrap();
        assert_eq!(c.kind, OrbitKind::Stationary, "ic ({}, {})", row.alpha0, row.theta0);
        assert_eq!(e.entropy, 0.0);
    }
}

proptest! {
    #[test]
    fn spectrum_agrees_with_oracle_for_any_length(x in prop::collection::vec(-10.0f64..10.0, 1..80)) {
        let s = amplitude_spectrum(&x).unwrap();
        let (dev, _) = dft_errors(&x, &s.amplitudes);
        prop_assert!(dev < 1e-11);
    }

    #[test]
    fn entropy_never_exceeds_log2_of_occupied_bins(x in prop::collection::vec(0.0f64..1.0, 2..300)) {
        let e = shannon_entropy(&x, DEFAULT_BINS).unwrap();
        prop_assert!(e.entropy >= 0.0);
        prop_assert!(e.entropy <= (e.occupied_bins as f64).log2() + 1e-12);
    }

    #[test]
    fn periodic_sequences_are_recognised(m in 2usize..=16, reps in 4usize..20, offset in 0.0f64..5.0, scale in 0.01f64..10.0) {
        let levels: Vec<f64> = (0..m).map(|i| offset + scale * ((i * (m - 1)) % m) as f64).collect();
        let x: Vec<f64> = (0..m * reps).map(|j| levels[j % m]).collect();
        let c = classify_orbit(&x, DEFAULT_REL_TOL, DEFAULT_MAX_PERIOD).unwrap();
        prop_assert_eq!(c.kind, OrbitKind::Periodic);
        prop_assert_eq!(c.period, m);
    }
}
