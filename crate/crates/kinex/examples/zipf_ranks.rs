//! Rank-size view of a heavy tail: sort the pooled wealths descending
//! and plot wealth against rank. A density tail p(x) ~ x^-(1+a) shows up
//! as rank slope -1/a.

use kinex::engine::{run_ensemble, ModelConfig, ParamSpec, RecordSchedule, SimConfig};
use kinex::exchange::SplitMode;
use kinex::stats::{fit_power_law, rank_samples, FitParams, LogHistogram};

fn quantile(sorted: &[f64], p: f64) -> f64 {
    sorted[(((sorted.len() - 1) as f64) * p).round() as usize]
}

fn main() {
    let config = SimConfig {
        n_agents: 100,
        total_money: 100.0,
        model: ModelConfig::SplitWealth {
            lambdas: ParamSpec::QuenchedUniform,
            mode: SplitMode::Coupled,
        },
        max_steps: 3_000_000,
        seed: 37,
        ensemble_size: 100,
        record: RecordSchedule::Geometric { factor: 1.5 },
    };
    let ensemble = run_ensemble(&config).unwrap();
    let pooled = &ensemble.pooled_final_wealths;

    let ranks = rank_samples(pooled);
    println!("top of the rank table:");
    for (rank, wealth) in ranks.iter().take(5) {
        println!("  rank {rank}: {wealth:.3}");
    }

    let mut sorted: Vec<f64> = pooled.iter().copied().filter(|&x| x > 0.0).collect();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let hist = LogHistogram::log_binned(pooled, 10).unwrap();
    let fit = fit_power_law(&hist, quantile(&sorted, 0.90), quantile(&sorted, 0.99)).unwrap();
    let nu = match fit.params {
        FitParams::PowerLaw { exponent, .. } => exponent,
        _ => unreachable!(),
    };

    // rank window mirroring the density-fit quantile window [0.90, 0.99]
    let n = ranks.len();
    let slope = ranks.log_log_slope(n / 100, n / 10).unwrap();
    println!(
        "tail exponent nu = {nu:.3}; zipf slope {slope:.4} vs -1/(nu-1) = {:.4}",
        -1.0 / (nu - 1.0)
    );
}
