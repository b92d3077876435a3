//! One theft-and-fraud agent in a yard-sale crowd is enough to destroy
//! condensation and leave a shallow power-law tail (exponent near 1.1).

use kinex::engine::{run_ensemble, ModelConfig, RecordSchedule, SimConfig};
use kinex::stats::{fit_lognormal, fit_power_law, FitParams, LogHistogram};

fn quantile(sorted: &[f64], p: f64) -> f64 {
    sorted[(((sorted.len() - 1) as f64) * p).round() as usize]
}

fn main() {
    let config = SimConfig {
        n_agents: 100,
        total_money: 100.0,
        model: ModelConfig::MixedAgents {
            tf_agents: [0].into_iter().collect(),
        },
        max_steps: 1_000_000,
        seed: 13,
        ensemble_size: 100,
        record: RecordSchedule::Geometric { factor: 1.5 },
    };

    let ensemble = run_ensemble(&config).unwrap();
    println!(
        "richest wealth saturates near {:.1} of M = {} instead of condensing",
        ensemble.series.values.last().unwrap(),
        config.total_money
    );

    // tail window: top decade of the positive wealths, minus the top
    // percent where the quasi-condensate remnant piles up
    let mut sorted: Vec<f64> = ensemble
        .pooled_final_wealths
        .iter()
        .copied()
        .filter(|&x| x > 0.0)
        .collect();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let (lo, hi) = (quantile(&sorted, 0.90), quantile(&sorted, 0.99));

    let hist = LogHistogram::log_binned(&ensemble.pooled_final_wealths, 10).unwrap();
    let power = fit_power_law(&hist, lo, hi).unwrap();
    let logn = fit_lognormal(&hist, lo, hi).unwrap();
    if let FitParams::PowerLaw { exponent, .. } = power.params {
        println!("tail fit over [{lo:.3}, {hi:.3}]: exponent = {exponent:.3}");
    }
    println!(
        "power law R2 = {:.4} beats lognormal R2 = {:.4} on the same window",
        power.r_squared, logn.r_squared
    );
}
