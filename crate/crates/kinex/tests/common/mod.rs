//! Shared test support: inverse-CDF sample generators for the reference
//! distributions. These stay independent of the fitting code they are
//! used to check.

// each test binary uses its own subset
#![allow(dead_code)]

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Pareto samples with density exponent `nu` (`p(x) ~ x^-nu` for
/// `x >= x_min`, requires `nu > 1`): `x = x_min * (1 - u)^(-1/(nu-1))`.
pub fn pareto_samples(nu: f64, x_min: f64, n: usize, seed: u64) -> Vec<f64> {
    assert!(nu > 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inv_a = -1.0 / (nu - 1.0);
    (0..n)
        .map(|_| x_min * (1.0 - rng.gen::<f64>()).powf(inv_a))
        .collect()
}

/// Exponential samples with mean `t`: `x = -t * ln(1 - u)`.
pub fn exponential_samples(t: f64, n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| -t * (1.0 - rng.gen::<f64>()).ln()).collect()
}

/// Lognormal samples: `x = exp(mu + sigma * probit(u))`.
pub fn lognormal_samples(mu: f64, sigma: f64, n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let u: f64 = rng.gen();
            (mu + sigma * probit(u)).exp()
        })
        .collect()
}

/// Inverse standard-normal CDF (Acklam's rational approximation, about
/// 1e-9 absolute error; ample for sample generation).
pub fn probit(p: f64) -> f64 {
    assert!(p > 0.0 && p < 1.0);
    const A: [f64; 6] = [
        -3.969683028665376e+01,
        2.209460984245205e+02,
        -2.759285104469687e+02,
        1.383577518672690e+02,
        -3.066479806614716e+01,
        2.506628277459239e+00,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e+01,
        1.615858368580409e+02,
        -1.556989798598866e+02,
        6.680131188771972e+01,
        -1.328068155288572e+01,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-03,
        -3.223964580411365e-01,
        -2.400758277161838e+00,
        -2.549732539343734e+00,
        4.374664141464968e+00,
        2.938163982698783e+00,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-03,
        3.224671290700398e-01,
        2.445134137142996e+00,
        3.754408661907416e+00,
    ];
    const P_LOW: f64 = 0.02425;

    if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        -probit(1.0 - p)
    }
}

/// Nearest-rank quantile of an ascending-sorted slice.
pub fn quantile(sorted: &[f64], p: f64) -> f64 {
    sorted[(((sorted.len() - 1) as f64) * p).round() as usize]
}

/// Ascending sort of the positive entries.
pub fn positive_sorted(samples: &[f64]) -> Vec<f64> {
    let mut v: Vec<f64> = samples.iter().copied().filter(|&x| x > 0.0).collect();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v
}
