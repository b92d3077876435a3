//! Gini coefficient across the five economies at a matched scale: from
//! near-perfect inequality under pure yard-sale to the moderated mixes.

use kinex::engine::{run_ensemble, ModelConfig, ParamSpec, RecordSchedule, SimConfig};
use kinex::exchange::{DisagreementPolicy, SplitMode};
use kinex::stats::gini;

fn main() {
    let economies: Vec<(&str, ModelConfig)> = vec![
        ("pure yard-sale", ModelConfig::PureYs),
        ("pure theft-and-fraud", ModelConfig::PureTf),
        (
            "one TF agent",
            ModelConfig::MixedAgents {
                tf_agents: [0].into_iter().collect(),
            },
        ),
        (
            "0.1% TF stake split",
            ModelConfig::SplitWealth {
                lambdas: ParamSpec::Homogeneous(0.999),
                mode: SplitMode::Coupled,
            },
        ),
        (
            "quenched stake split",
            ModelConfig::SplitWealth {
                lambdas: ParamSpec::QuenchedUniform,
                mode: SplitMode::Coupled,
            },
        ),
        (
            "probabilistic choice",
            ModelConfig::ProbabilisticChoice {
                ps: ParamSpec::QuenchedUniform,
                disagreement: DisagreementPolicy::FallbackYs,
            },
        ),
    ];

    println!("{:<24} {:>8} {:>16}", "economy", "gini", "richest share");
    for (name, model) in economies {
        let config = SimConfig {
            n_agents: 100,
            total_money: 100.0,
            model,
            max_steps: 1_000_000,
            seed: 3,
            ensemble_size: 20,
            record: RecordSchedule::Geometric { factor: 2.0 },
        };
        let ensemble = run_ensemble(&config).unwrap();
        let g = gini(&ensemble.pooled_final_wealths).unwrap();
        let share = ensemble.series.values.last().unwrap() / config.total_money;
        println!("{name:<24} {g:>8.4} {share:>16.4}");
    }
}
