//! Pure yard-sale dynamics: free and fair trading, and one agent still
//! ends up with everything.
//!
//! Run a small ensemble, watch the ensemble-averaged richest wealth climb
//! toward the total money, and check how many replicas finish with the
//! richest agent holding more than 99% of the economy.

use kinex::engine::{run_ensemble, run_replica, ModelConfig, RecordSchedule, SimConfig};
use kinex::stats::gini;

fn main() {
    let config = SimConfig {
        n_agents: 100,
        total_money: 100.0,
        model: ModelConfig::PureYs,
        max_steps: 1_000_000,
        seed: 7,
        ensemble_size: 10,
        record: RecordSchedule::Geometric { factor: 1.3 },
    };

    let ensemble = run_ensemble(&config).unwrap();
    println!("ensemble-averaged richest wealth (M = {}):", config.total_money);
    for (t, v) in ensemble.series.times.iter().zip(&ensemble.series.values) {
        if *t == 0 || *t >= 1000 {
            println!("  step {t:>9}: {v:>8.3}");
        }
    }

    let mut condensed = 0;
    for replica in 0..config.ensemble_size as u64 {
        let run = run_replica(&config, replica).unwrap();
        let share = run.final_state.richest() / config.total_money;
        if share > 0.99 {
            condensed += 1;
        }
    }
    println!(
        "{condensed}/{} replicas ended with one agent above 99% of all wealth",
        config.ensemble_size
    );
    println!(
        "pooled final gini: {:.4} (1 - 1/N = {:.4} is total condensation)",
        gini(&ensemble.pooled_final_wealths).unwrap(),
        1.0 - 1.0 / config.n_agents as f64
    );
}
