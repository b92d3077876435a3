//! Distribution analysis: log-binned histograms, tail-law fits, Zipf rank
//! data, and inequality metrics.
//!
//! Fits are least squares on the log-binned data, matching the
//! chi-square-per-DoF and R-squared diagnostics the comparison tables
//! report: power laws and lognormals are fitted in log-log coordinates
//! (line and quadratic respectively), exponentials on (x, log density).

use std::fmt;

use crate::exchange::WealthVector;

#[derive(Debug, Clone, PartialEq)]
pub enum StatsError {
    EmptySamples,
    /// Every sample is zero; nothing to bin on a log scale.
    AllZero,
    NegativeSample { value: f64 },
    /// Too few occupied bins inside the fit range.
    InsufficientBins { got: usize, need: usize },
    /// Exponential fit found a non-decaying slope.
    NonDecaying { slope: f64 },
    BadRange { x_min: f64, x_max: f64 },
    ZeroTotal,
    BadRankRange { k_min: usize, k_max: usize, len: usize },
    BadBinCount,
}

impl fmt::Display for StatsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StatsError::EmptySamples => write!(f, "no samples supplied"),
            StatsError::AllZero => write!(f, "all samples are zero"),
            StatsError::NegativeSample { value } => {
                write!(f, "samples must be non-negative, got {value}")
            }
            StatsError::InsufficientBins { got, need } => {
                write!(f, "fit needs {need} occupied bins in range, got {got}")
            }
            StatsError::NonDecaying { slope } => {
                write!(f, "exponential fit failed: non-decaying slope {slope}")
            }
            StatsError::BadRange { x_min, x_max } => {
                write!(f, "invalid fit range [{x_min}, {x_max}]")
            }
            StatsError::ZeroTotal => write!(f, "total wealth is zero"),
            StatsError::BadRankRange { k_min, k_max, len } => {
                write!(f, "invalid rank range [{k_min}, {k_max}] for {len} entries")
            }
            StatsError::BadBinCount => write!(f, "bins_per_decade must be at least 1"),
        }
    }
}

impl std::error::Error for StatsError {}

/// Logarithmically binned empirical density of the positive samples.
///
/// Densities are `count / (n_samples * bin_width)` with `n_samples`
/// counting every input sample; zero-wealth samples are tallied
/// separately and never binned, so the density integrates to the positive
/// mass fraction.
#[derive(Debug, Clone, PartialEq)]
pub struct LogHistogram {
    bin_edges: Vec<f64>,
    counts: Vec<u64>,
    densities: Vec<f64>,
    n_samples: usize,
    zero_count: usize,
}

impl LogHistogram {
    /// Bin the samples into geometric bins spanning the positive range.
    pub fn log_binned(samples: &[f64], bins_per_decade: usize) -> Result<Self, StatsError> {
        if bins_per_decade < 1 {
            return Err(StatsError::BadBinCount);
        }
        if samples.is_empty() {
            return Err(StatsError::EmptySamples);
        }
        let mut zero_count = 0usize;
        let mut x_lo = f64::INFINITY;
        let mut x_hi = f64::NEG_INFINITY;
        for &x in samples {
            if !(x.is_finite() && x >= 0.0) {
                return Err(StatsError::NegativeSample { value: x });
            }
            if x == 0.0 {
                zero_count += 1;
            } else {
                x_lo = x_lo.min(x);
                x_hi = x_hi.max(x);
            }
        }
        if zero_count == samples.len() {
            return Err(StatsError::AllZero);
        }

        let bpd = bins_per_decade as f64;
        // log-space differences; the plain ratio can overflow when the
        // smallest positive sample is subnormal
        let lo_log = x_lo.log10();
        let decades = x_hi.log10() - lo_log;
        let n_bins = ((decades * bpd).ceil() as usize).max(1);
        let bin_edges: Vec<f64> = (0..=n_bins)
            .map(|k| {
                if k == 0 {
                    x_lo
                } else {
                    10f64.powf(lo_log + k as f64 / bpd)
                }
            })
            .collect();

        let mut counts = vec![0u64; n_bins];
        for &x in samples {
            if x == 0.0 {
                continue;
            }
            let mut k = ((x.log10() - lo_log) * bpd).floor() as isize;
            k = k.clamp(0, n_bins as isize - 1);
            let mut k = k as usize;
            // last-ulp guard against edge rounding
            while k > 0 && x < bin_edges[k] {
                k -= 1;
            }
            while k + 1 < n_bins && x >= bin_edges[k + 1] {
                k += 1;
            }
            counts[k] += 1;
        }

        let n_samples = samples.len();
        let densities: Vec<f64> = counts
            .iter()
            .enumerate()
            .map(|(k, &c)| c as f64 / (n_samples as f64 * (bin_edges[k + 1] - bin_edges[k])))
            .collect();

        Ok(LogHistogram {
            bin_edges,
            counts,
            densities,
            n_samples,
            zero_count,
        })
    }

    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    pub fn bin_edges(&self) -> &[f64] {
        &self.bin_edges
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn densities(&self) -> &[f64] {
        &self.densities
    }

    pub fn n_samples(&self) -> usize {
        self.n_samples
    }

    pub fn zero_count(&self) -> usize {
        self.zero_count
    }

    /// Fraction of all samples that were exactly zero.
    pub fn zero_mass_fraction(&self) -> f64 {
        self.zero_count as f64 / self.n_samples as f64
    }

    /// Geometric bin centers.
    pub fn centers(&self) -> Vec<f64> {
        (0..self.bins())
            .map(|k| (self.bin_edges[k] * self.bin_edges[k + 1]).sqrt())
            .collect()
    }

    /// `(center, density)` of every occupied bin whose interval overlaps
    /// `[x_min, x_max]`.
    pub fn occupied_in_range(&self, x_min: f64, x_max: f64) -> Vec<(f64, f64)> {
        let centers = self.centers();
        (0..self.bins())
            .filter(|&k| self.counts[k] > 0)
            .filter(|&k| self.bin_edges[k + 1] > x_min && self.bin_edges[k] <= x_max)
            .map(|k| (centers[k], self.densities[k]))
            .collect()
    }
}

/// Minimum occupied bins for any fit.
pub const MIN_FIT_BINS: usize = 4;

/// Default bins per decade for histogramming.
pub const DEFAULT_BINS_PER_DECADE: usize = 10;

/// Fitted functional form with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum FitParams {
    /// `density ~ amplitude * x^(-exponent)`
    PowerLaw { exponent: f64, amplitude: f64 },
    /// The normalized lognormal density
    /// `1 / (x sigma sqrt(2 pi)) * exp(-(ln x - mu)^2 / (2 sigma^2))`:
    /// location and scale only, no free amplitude.
    Lognormal { mu: f64, sigma: f64 },
    /// `density ~ amplitude * exp(-x / temperature)`
    Exponential { temperature: f64, amplitude: f64 },
}

/// Outcome of fitting one functional form over one window.
#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub params: FitParams,
    pub fit_range: (f64, f64),
    pub bins_used: usize,
    /// Residual sum of squares per degree of freedom, in the fit's
    /// (log-density) coordinates.
    pub chi2_per_dof: f64,
    pub r_squared: f64,
}

fn check_range(x_min: f64, x_max: f64) -> Result<(), StatsError> {
    if x_min.is_finite() && x_max.is_finite() && x_min > 0.0 && x_max >= x_min {
        Ok(())
    } else {
        Err(StatsError::BadRange { x_min, x_max })
    }
}

/// Least squares line through `(x, y)`: `(slope, intercept, ss_res, ss_tot)`.
fn fit_line(xs: &[f64], ys: &[f64]) -> (f64, f64, f64, f64) {
    let n = xs.len() as f64;
    let x_mean = xs.iter().sum::<f64>() / n;
    let y_mean = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - x_mean) * (x - x_mean)).sum();
    let sxy: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (x - x_mean) * (y - y_mean))
        .sum();
    let slope = sxy / sxx;
    let intercept = y_mean - slope * x_mean;
    let ss_res: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum();
    let ss_tot: f64 = ys.iter().map(|y| (y - y_mean) * (y - y_mean)).sum();
    (slope, intercept, ss_res, ss_tot)
}

/// Log-density of the unit-normalized lognormal at `u = ln x`.
fn lognormal_log_density(u: f64, mu: f64, sigma: f64) -> f64 {
    let d = u - mu;
    -u - d * d / (2.0 * sigma * sigma) - (sigma * (2.0 * std::f64::consts::PI).sqrt()).ln()
}

/// Minimize a 2-parameter objective with Nelder-Mead. Deterministic; the
/// parameter space is unconstrained (callers reparameterize as needed).
fn nelder_mead_2d(f: impl Fn([f64; 2]) -> f64, start: [f64; 2], scale: f64) -> [f64; 2] {
    let mut simplex = [
        start,
        [start[0] + scale, start[1]],
        [start[0], start[1] + scale],
    ];
    let mut values = simplex.map(&f);
    for _ in 0..500 {
        // order best -> worst
        let mut idx = [0, 1, 2];
        idx.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());
        let (best, mid, worst) = (idx[0], idx[1], idx[2]);
        let spread = (values[worst] - values[best]).abs();
        if spread < 1e-14 * (1.0 + values[best].abs()) {
            break;
        }
        let centroid = [
            (simplex[best][0] + simplex[mid][0]) / 2.0,
            (simplex[best][1] + simplex[mid][1]) / 2.0,
        ];
        let reflect = [
            centroid[0] + (centroid[0] - simplex[worst][0]),
            centroid[1] + (centroid[1] - simplex[worst][1]),
        ];
        let fr = f(reflect);
        if fr < values[best] {
            let expand = [
                centroid[0] + 2.0 * (centroid[0] - simplex[worst][0]),
                centroid[1] + 2.0 * (centroid[1] - simplex[worst][1]),
            ];
            let fe = f(expand);
            if fe < fr {
                simplex[worst] = expand;
                values[worst] = fe;
            } else {
                simplex[worst] = reflect;
                values[worst] = fr;
            }
        } else if fr < values[mid] {
            simplex[worst] = reflect;
            values[worst] = fr;
        } else {
            let contract = [
                centroid[0] + 0.5 * (simplex[worst][0] - centroid[0]),
                centroid[1] + 0.5 * (simplex[worst][1] - centroid[1]),
            ];
            let fc = f(contract);
            if fc < values[worst] {
                simplex[worst] = contract;
                values[worst] = fc;
            } else {
                for k in [mid, worst] {
                    simplex[k] = [
                        simplex[best][0] + 0.5 * (simplex[k][0] - simplex[best][0]),
                        simplex[best][1] + 0.5 * (simplex[k][1] - simplex[best][1]),
                    ];
                    values[k] = f(simplex[k]);
                }
            }
        }
    }
    let mut idx = [0, 1, 2];
    idx.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());
    simplex[idx[0]]
}

fn r_squared_of(ss_res: f64, ss_tot: f64) -> f64 {
    if ss_tot > 0.0 {
        1.0 - ss_res / ss_tot
    } else if ss_res == 0.0 {
        1.0
    } else {
        f64::NEG_INFINITY
    }
}

fn fit_points(
    hist: &LogHistogram,
    x_min: f64,
    x_max: f64,
) -> Result<Vec<(f64, f64)>, StatsError> {
    check_range(x_min, x_max)?;
    let pts = hist.occupied_in_range(x_min, x_max);
    if pts.len() < MIN_FIT_BINS {
        return Err(StatsError::InsufficientBins {
            got: pts.len(),
            need: MIN_FIT_BINS,
        });
    }
    Ok(pts)
}

/// Fit `density ~ amplitude * x^(-nu)` by least squares on the log-log
/// points of the occupied bins overlapping `[x_min, x_max]`.
pub fn fit_power_law(hist: &LogHistogram, x_min: f64, x_max: f64) -> Result<FitResult, StatsError> {
    let pts = fit_points(hist, x_min, x_max)?;
    let xs: Vec<f64> = pts.iter().map(|(c, _)| c.ln()).collect();
    let ys: Vec<f64> = pts.iter().map(|(_, d)| d.ln()).collect();
    let (slope, intercept, ss_res, ss_tot) = fit_line(&xs, &ys);
    let dof = (pts.len() - 2) as f64;
    Ok(FitResult {
        params: FitParams::PowerLaw {
            exponent: -slope,
            amplitude: intercept.exp(),
        },
        fit_range: (x_min, x_max),
        bins_used: pts.len(),
        chi2_per_dof: ss_res / dof,
        r_squared: r_squared_of(ss_res, ss_tot),
    })
}

/// Fit the normalized lognormal log-density (location `mu` and scale
/// `sigma`, no free amplitude) over the same kind of window as
/// [`fit_power_law`], reporting comparable metrics.
pub fn fit_lognormal(hist: &LogHistogram, x_min: f64, x_max: f64) -> Result<FitResult, StatsError> {
    let pts = fit_points(hist, x_min, x_max)?;
    let us: Vec<f64> = pts.iter().map(|(c, _)| c.ln()).collect();
    let ys: Vec<f64> = pts.iter().map(|(_, d)| d.ln()).collect();

    // A scale much wider than the window is unidentifiable (the form
    // degenerates into a power law), so cap it at half the log-width.
    let u_lo = us.iter().cloned().fold(f64::INFINITY, f64::min);
    let u_hi = us.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let sigma_max = (u_hi - u_lo) / 2.0;

    // residual sum of squares in (mu, ln sigma)
    let objective = |p: [f64; 2]| -> f64 {
        let (mu, sigma) = (p[0], p[1].exp().min(sigma_max));
        us.iter()
            .zip(&ys)
            .map(|(&u, &y)| {
                let r = y - lognormal_log_density(u, mu, sigma);
                r * r
            })
            .sum()
    };

    // start near the log-density peak: y is maximal at u = mu - sigma^2
    let sigma0 = (sigma_max / 2.0).max(0.1);
    let u_peak = us
        .iter()
        .zip(&ys)
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .map(|(&u, _)| u)
        .unwrap();
    let start = [u_peak + sigma0 * sigma0, sigma0.ln()];
    let best = nelder_mead_2d(objective, start, 0.5);
    let (mu, sigma) = (best[0], best[1].exp().min(sigma_max));

    let ss_res = objective(best);
    let y_mean = ys.iter().sum::<f64>() / ys.len() as f64;
    let ss_tot: f64 = ys.iter().map(|y| (y - y_mean) * (y - y_mean)).sum();
    let dof = (pts.len() - 2) as f64;
    Ok(FitResult {
        params: FitParams::Lognormal { mu, sigma },
        fit_range: (x_min, x_max),
        bins_used: pts.len(),
        chi2_per_dof: ss_res / dof,
        r_squared: r_squared_of(ss_res, ss_tot),
    })
}

/// Fit `density ~ amplitude * exp(-x / T)` by least squares on
/// `(x, log density)`; a non-decaying slope is a fit failure.
pub fn fit_exponential(
    hist: &LogHistogram,
    x_min: f64,
    x_max: f64,
) -> Result<FitResult, StatsError> {
    let pts = fit_points(hist, x_min, x_max)?;
    let xs: Vec<f64> = pts.iter().map(|(c, _)| *c).collect();
    let ys: Vec<f64> = pts.iter().map(|(_, d)| d.ln()).collect();
    let (slope, intercept, ss_res, ss_tot) = fit_line(&xs, &ys);
    if slope >= 0.0 {
        return Err(StatsError::NonDecaying { slope });
    }
    let dof = (pts.len() - 2) as f64;
    Ok(FitResult {
        params: FitParams::Exponential {
            temperature: -1.0 / slope,
            amplitude: intercept.exp(),
        },
        fit_range: (x_min, x_max),
        bins_used: pts.len(),
        chi2_per_dof: ss_res / dof,
        r_squared: r_squared_of(ss_res, ss_tot),
    })
}

/// Default fit window for tail fits: the 0.9 quantile of the positive
/// samples up to the largest sample.
pub fn default_tail_range(samples: &[f64]) -> Result<(f64, f64), StatsError> {
    let mut positive: Vec<f64> = samples.iter().copied().filter(|&x| x > 0.0).collect();
    if positive.is_empty() {
        return Err(if samples.is_empty() {
            StatsError::EmptySamples
        } else {
            StatsError::AllZero
        });
    }
    positive.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let idx = (((positive.len() - 1) as f64) * 0.9).round() as usize;
    Ok((positive[idx], positive[positive.len() - 1]))
}

/// Wealths in descending order, paired with ranks `1..=N` on iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct RankList {
    wealths: Vec<f64>,
}

impl RankList {
    pub fn wealths(&self) -> &[f64] {
        &self.wealths
    }

    pub fn len(&self) -> usize {
        self.wealths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.wealths.is_empty()
    }

    /// `(rank, wealth)` pairs, rank starting at 1.
    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.wealths.iter().enumerate().map(|(k, &w)| (k + 1, w))
    }

    /// Least-squares slope of `ln wealth` on `ln rank` over ranks
    /// `k_min..=k_max` (positive wealths only).
    pub fn log_log_slope(&self, k_min: usize, k_max: usize) -> Result<f64, StatsError> {
        if k_min < 1 || k_max > self.wealths.len() || k_min >= k_max {
            return Err(StatsError::BadRankRange {
                k_min,
                k_max,
                len: self.wealths.len(),
            });
        }
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for k in k_min..=k_max {
            let w = self.wealths[k - 1];
            if w > 0.0 {
                xs.push((k as f64).ln());
                ys.push(w.ln());
            }
        }
        if xs.len() < 2 {
            return Err(StatsError::BadRankRange {
                k_min,
                k_max,
                len: self.wealths.len(),
            });
        }
        let (slope, _, _, _) = fit_line(&xs, &ys);
        Ok(slope)
    }
}

/// Rank the agents of a final state by wealth, richest first.
pub fn zipf_ranks(state: &WealthVector) -> RankList {
    rank_samples(state.as_slice())
}

/// Rank arbitrary samples (e.g. pooled final wealths), largest first.
pub fn rank_samples(samples: &[f64]) -> RankList {
    let mut wealths = samples.to_vec();
    wealths.sort_by(|a, b| b.partial_cmp(a).unwrap());
    RankList { wealths }
}

/// Gini coefficient of a non-negative sample set with positive total.
pub fn gini(wealths: &[f64]) -> Result<f64, StatsError> {
    if wealths.is_empty() {
        return Err(StatsError::EmptySamples);
    }
    for &w in wealths {
        if !(w.is_finite() && w >= 0.0) {
            return Err(StatsError::NegativeSample { value: w });
        }
    }
    let total: f64 = wealths.iter().sum();
    if total <= 0.0 {
        return Err(StatsError::ZeroTotal);
    }
    let mut sorted = wealths.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sorted.len() as f64;
    let weighted: f64 = sorted
        .iter()
        .enumerate()
        .map(|(k, &w)| (k as f64 + 1.0) * w)
        .sum();
    Ok(2.0 * weighted / (n * total) - (n + 1.0) / n)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Histogram with exact densities tabulated at prescribed edges.
    fn tabulated(edges: Vec<f64>, density_of: impl Fn(f64) -> f64) -> LogHistogram {
        let n = edges.len() - 1;
        let centers: Vec<f64> = (0..n).map(|k| (edges[k] * edges[k + 1]).sqrt()).collect();
        LogHistogram {
            densities: centers.iter().map(|&c| density_of(c)).collect(),
            counts: vec![1; n],
            n_samples: n,
            zero_count: 0,
            bin_edges: edges,
        }
    }

    fn geometric_edges(x_lo: f64, bins_per_decade: usize, n_bins: usize) -> Vec<f64> {
        (0..=n_bins)
            .map(|k| x_lo * 10f64.powf(k as f64 / bins_per_decade as f64))
            .collect()
    }

    #[test]
    fn histogram_single_value() {
        let hist = LogHistogram::log_binned(&[3.5, 3.5, 3.5], 10).unwrap();
        assert_eq!(hist.bins(), 1);
        assert_eq!(hist.counts(), &[3]);
        assert!(hist.bin_edges()[0] <= 3.5 && 3.5 < hist.bin_edges()[1] * (1.0 + 1e-12));
    }

    #[test]
    fn histogram_counts_conserved_and_zeros_separate() {
        let samples = [0.0, 0.5, 1.0, 2.0, 0.0, 8.0, 100.0];
        let hist = LogHistogram::log_binned(&samples, 4).unwrap();
        assert_eq!(hist.counts().iter().sum::<u64>(), 5);
        assert_eq!(hist.zero_count(), 2);
        assert!((hist.zero_mass_fraction() - 2.0 / 7.0).abs() < 1e-15);
        // density integrates to the positive mass fraction
        let integral: f64 = (0..hist.bins())
            .map(|k| hist.densities()[k] * (hist.bin_edges()[k + 1] - hist.bin_edges()[k]))
            .sum();
        assert!((integral - 5.0 / 7.0).abs() < 1e-12);
    }

    #[test]
    fn densities_stable_under_sample_doubling() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
        let mut draw = |n: usize| -> Vec<f64> {
            (0..n).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect()
        };
        let small = LogHistogram::log_binned(&draw(20_000), 10).unwrap();
        let large = LogHistogram::log_binned(&draw(40_000), 10).unwrap();
        // density is per money unit and per sample, so it must agree at
        // matched abscissae within sampling error
        let density_at = |hist: &LogHistogram, x: f64| -> f64 {
            let k = hist
                .bin_edges()
                .windows(2)
                .position(|e| e[0] <= x && x < e[1])
                .unwrap();
            hist.densities()[k]
        };
        for x in [0.5, 1.0, 2.0] {
            let a = density_at(&small, x);
            let b = density_at(&large, x);
            assert!((a - b).abs() / a < 0.2, "x = {x}: {a} vs {b}");
        }
    }

    #[test]
    fn histogram_rejects_degenerate_input() {
        assert_eq!(
            LogHistogram::log_binned(&[], 10).unwrap_err(),
            StatsError::EmptySamples
        );
        assert_eq!(
            LogHistogram::log_binned(&[0.0, 0.0], 10).unwrap_err(),
            StatsError::AllZero
        );
        assert!(matches!(
            LogHistogram::log_binned(&[1.0, -2.0], 10),
            Err(StatsError::NegativeSample { .. })
        ));
        assert_eq!(
            LogHistogram::log_binned(&[1.0], 0).unwrap_err(),
            StatsError::BadBinCount
        );
    }

    #[test]
    fn power_law_fit_recovers_exact_line() {
        let hist = tabulated(geometric_edges(1.0, 10, 30), |x| x.powf(-1.5));
        let fit = fit_power_law(&hist, 1.0, 1e3).unwrap();
        match fit.params {
            FitParams::PowerLaw { exponent, amplitude } => {
                assert!((exponent - 1.5).abs() < 1e-9, "nu = {exponent}");
                assert!((amplitude - 1.0).abs() < 1e-9);
            }
            _ => unreachable!(),
        }
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
        assert!(fit.chi2_per_dof < 1e-20);
    }

    #[test]
    fn lognormal_fit_recovers_exact_parameters() {
        let mu = 0.3;
        let sigma = 0.8;
        let f = |x: f64| {
            1.0 / (x * sigma * (2.0 * std::f64::consts::PI).sqrt())
                * (-(x.ln() - mu).powi(2) / (2.0 * sigma * sigma)).exp()
        };
        let hist = tabulated(geometric_edges(0.05, 10, 30), f);
        let fit = fit_lognormal(&hist, 0.05, 60.0).unwrap();
        match fit.params {
            FitParams::Lognormal { mu: m, sigma: s } => {
                assert!((m - mu).abs() < 1e-6, "mu = {m}");
                assert!((s - sigma).abs() < 1e-6, "sigma = {s}");
            }
            _ => unreachable!(),
        }
        assert!((fit.r_squared - 1.0).abs() < 1e-9);
    }

    #[test]
    fn lognormal_fit_cannot_match_free_amplitude() {
        // power-law data scaled far below unit normalization: the
        // amplitude-free lognormal has to miss it
        let hist = tabulated(geometric_edges(1.0, 10, 30), |x| 1e-3 * x.powf(-1.5));
        let power = fit_power_law(&hist, 1.0, 1e3).unwrap();
        let logn = fit_lognormal(&hist, 1.0, 1e3).unwrap();
        assert!(power.r_squared > logn.r_squared);
        assert!(power.chi2_per_dof < logn.chi2_per_dof);
    }

    #[test]
    fn exponential_fit_recovers_exact_temperature() {
        let hist = tabulated(geometric_edges(0.01, 10, 30), |x| (-x).exp());
        let fit = fit_exponential(&hist, 0.01, 11.0).unwrap();
        match fit.params {
            FitParams::Exponential {
                temperature,
                amplitude,
            } => {
                assert!((temperature - 1.0).abs() < 1e-9, "T = {temperature}");
                assert!((amplitude - 1.0).abs() < 1e-9);
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn exponential_fit_rejects_rising_density() {
        let hist = tabulated(geometric_edges(1.0, 10, 20), |x| x);
        assert!(matches!(
            fit_exponential(&hist, 1.0, 200.0),
            Err(StatsError::NonDecaying { .. })
        ));
    }

    #[test]
    fn fits_demand_enough_occupied_bins() {
        let hist = LogHistogram::log_binned(&[1.0, 10.0, 100.0], 1).unwrap();
        assert!(matches!(
            fit_power_law(&hist, 1.0, 100.0),
            Err(StatsError::InsufficientBins { .. })
        ));
        assert!(matches!(
            fit_power_law(&hist, 100.0, 1.0),
            Err(StatsError::BadRange { .. })
        ));
    }

    #[test]
    fn power_law_exponent_is_scale_invariant() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        // Pareto-ish samples with density exponent 2
        let samples: Vec<f64> = (0..10_000)
            .map(|_| 1.0 / (1.0 - rng.gen::<f64>()))
            .collect();
        let nu_of = |scale: f64| {
            let scaled: Vec<f64> = samples.iter().map(|&x| x * scale).collect();
            let hist = LogHistogram::log_binned(&scaled, 10).unwrap();
            let (lo, hi) = default_tail_range(&scaled).unwrap();
            match fit_power_law(&hist, lo, hi).unwrap().params {
                FitParams::PowerLaw { exponent, .. } => exponent,
                _ => unreachable!(),
            }
        };
        let base = nu_of(1.0);
        for scale in [0.01, 3.7, 1000.0] {
            assert!(
                (nu_of(scale) - base).abs() < 1e-9,
                "scale {scale}: {} vs {base}",
                nu_of(scale)
            );
        }
    }

    #[test]
    fn zipf_rank_examples() {
        let state = WealthVector::from_wealths(vec![1.0, 3.0, 2.0]).unwrap();
        let ranks = zipf_ranks(&state);
        let pairs: Vec<(usize, f64)> = ranks.iter().collect();
        assert_eq!(pairs, vec![(1, 3.0), (2, 2.0), (3, 1.0)]);

        let equal = WealthVector::from_wealths(vec![2.0, 2.0, 2.0]).unwrap();
        assert_eq!(zipf_ranks(&equal).wealths(), &[2.0, 2.0, 2.0]);

        let single = rank_samples(&[5.0]);
        assert_eq!(single.len(), 1);
        assert!(single.log_log_slope(1, 1).is_err());
    }

    #[test]
    fn gini_examples() {
        assert_eq!(gini(&[1.0, 1.0, 1.0, 1.0]).unwrap(), 0.0);
        let n = 10usize;
        let mut one_owns_all = vec![0.0; n];
        one_owns_all[3] = 7.0;
        let g = gini(&one_owns_all).unwrap();
        assert!((g - (n as f64 - 1.0) / n as f64).abs() < 1e-12);

        // frozen from the mean-absolute-difference definition
        let brute = |xs: &[f64]| {
            let n = xs.len() as f64;
            let mean = xs.iter().sum::<f64>() / n;
            let mut sum = 0.0;
            for &a in xs {
                for &b in xs {
                    sum += (a - b).abs();
                }
            }
            sum / (2.0 * n * n * mean)
        };
        let xs = [3.0, 1.0];
        assert!((brute(&xs) - 0.25).abs() < 1e-15);
        assert!((gini(&xs).unwrap() - 0.25).abs() < 1e-12);

        assert_eq!(gini(&[0.0, 0.0]).unwrap_err(), StatsError::ZeroTotal);
        assert_eq!(gini(&[]).unwrap_err(), StatsError::EmptySamples);
    }

    #[test]
    fn gini_matches_brute_force_on_random_data() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let xs: Vec<f64> = (0..200).map(|_| rng.gen::<f64>() * 10.0).collect();
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let mut sum = 0.0;
        for &a in &xs {
            for &b in &xs {
                sum += (a - b).abs();
            }
        }
        let brute = sum / (2.0 * n * n * mean);
        assert!((gini(&xs).unwrap() - brute).abs() < 1e-10);
    }

    #[test]
    fn default_tail_range_uses_upper_decade() {
        let samples: Vec<f64> = (1..=100).map(|k| k as f64).collect();
        let (lo, hi) = default_tail_range(&samples).unwrap();
        assert_eq!(lo, 90.0);
        assert_eq!(hi, 100.0);
    }
}
