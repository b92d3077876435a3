//! Fitters checked against inverse-CDF oracle samples, plus the
//! rank-slope/tail-exponent consistency relation.

mod common;

use common::{pareto_samples, positive_sorted, quantile};
use kinex::stats::{fit_power_law, rank_samples, FitParams, LogHistogram};

fn fitted_nu(samples: &[f64], x_min: f64, x_max: f64) -> f64 {
    let hist = LogHistogram::log_binned(samples, 10).unwrap();
    match fit_power_law(&hist, x_min, x_max).unwrap().params {
        FitParams::PowerLaw { exponent, .. } => exponent,
        _ => unreachable!(),
    }
}

#[test]
fn pareto_log_log_slope_matches_generator() {
    // density exponent 2, fitted over the generated range below the
    // noisy extreme order statistics
    let samples = pareto_samples(2.0, 1.0, 1_000_000, 42);
    let sorted = positive_sorted(&samples);
    let nu = fitted_nu(&samples, 1.0, quantile(&sorted, 0.999));
    assert!((nu - 2.0).abs() < 0.05, "nu = {nu}");
}

#[test]
fn zipf_slope_tracks_tail_exponent() {
    // tail p(x) ~ x^-(1+a) implies rank wealth x_k ~ k^(-1/a)
    for (a, seed) in [(0.5, 1u64), (1.0, 2), (2.0, 3), (2.7, 4)] {
        let nu_true = 1.0 + a;
        let samples = pareto_samples(nu_true, 1.0, 200_000, seed);
        let sorted = positive_sorted(&samples);
        let nu = fitted_nu(&samples, 1.0, quantile(&sorted, 0.999));

        let ranks = rank_samples(&samples);
        let slope = ranks
            .log_log_slope(10, samples.len() / 100)
            .unwrap();
        let expected = -1.0 / (nu - 1.0);
        assert!(
            (slope - expected).abs() <= 0.15 * expected.abs(),
            "a = {a}: slope {slope} vs -1/(nu-1) = {expected} (nu = {nu})"
        );
    }
}
