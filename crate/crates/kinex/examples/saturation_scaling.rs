//! The richest-agent wealth saturates at a time t_c that grows as a
//! power of the population size. Sweep N, detect each plateau, and fit
//! t_c(N) = a N^b.

use kinex::engine::{sweep_tc, ModelConfig, RecordSchedule, SimConfig};

fn main() {
    let template = SimConfig {
        n_agents: 100,
        total_money: 100.0,
        model: ModelConfig::MixedAgents {
            tf_agents: [0].into_iter().collect(),
        },
        max_steps: 2_000_000,
        seed: 19,
        ensemble_size: 100,
        record: RecordSchedule::Geometric { factor: 1.02 },
    };

    let outcome = sweep_tc(&template, &[50, 100, 200], 40, 0.05).unwrap();
    for p in &outcome.points {
        println!(
            "N = {:>4}: t_c = {:>8} (saturated richest wealth {:.2})",
            p.n_agents, p.t_c, p.saturated_value
        );
    }
    for n in &outcome.unsaturated {
        println!("N = {n:>4}: no saturation within the step budget");
    }
    println!(
        "t_c(N) = a N^b with a = {:.3}, b = {:.3} (R2 = {:.4})",
        outcome.fit.a, outcome.fit.b, outcome.fit.r_squared
    );
}
