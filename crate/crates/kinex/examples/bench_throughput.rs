use kinex::engine::*;
use kinex::exchange::*;
use std::time::Instant;

fn main() {
    for (name, model) in [
        ("pure_ys", ModelConfig::PureYs),
        ("mixed", ModelConfig::MixedAgents { tf_agents: [0usize].into_iter().collect() }),
        ("split", ModelConfig::SplitWealth { lambdas: ParamSpec::QuenchedUniform, mode: SplitMode::Coupled }),
        ("choice", ModelConfig::ProbabilisticChoice { ps: ParamSpec::QuenchedUniform, disagreement: DisagreementPolicy::FallbackYs }),
    ] {
        let config = SimConfig {
            n_agents: 100,
            total_money: 100.0,
            model,
            max_steps: 20_000_000,
            seed: 1,
            ensemble_size: 1,
            record: RecordSchedule::Geometric { factor: 1.1 },
        };
        let t0 = Instant::now();
        let run = run_replica(&config, 0).unwrap();
        let dt = t0.elapsed().as_secs_f64();
        println!("{name}: {:.1} M steps/s (drift {:.2e}, richest {:.3})",
            20.0 / dt, run.final_state.conservation_drift(), run.final_state.richest());
    }
}
