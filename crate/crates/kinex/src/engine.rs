//! Simulation driver: seeded replicas, ensembles, saturation detection,
//! and the saturation-time scaling sweep.
//!
//! # Randomness contract
//!
//! Every replica owns a ChaCha8 stream derived from the master seed: the
//! generator is seeded with `seed` and its stream counter set to the
//! replica index ([`replica_rng`]). Replicas are therefore independent,
//! order-free, and safe to run concurrently; ensembles reduce replica
//! outputs in index order so results never depend on scheduling.
//!
//! Within a replica the draw order is fixed. Quenched per-agent
//! parameters come first (agents `0..n`, one uniform each, when the model
//! calls for them). Then, per time step:
//!
//! 1. `i` uniform in `0..n`;
//! 2. `j` uniform in `0..n-1`, shifted past `i` so the pair is distinct;
//! 3. probabilistic choice only: the two strategy variates `u_i`, `u_j`
//!    (a skipped transaction ends the step here, consuming nothing more);
//! 4. `alpha` uniform in `[0, 1)`;
//! 5. the winner coin (`true` means `i` wins);
//!    independent-mode split transactions draw 4 and 5 twice, once per
//!    component, YS first.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::collections::BTreeSet;
use std::fmt;

use crate::exchange::{
    apply_split_independent, apply_transaction, choose_rule, DisagreementPolicy, ModelSpec,
    RuleChoice, SplitDraws, SplitMode, StakeRule, Transaction, WealthVector,
};

#[derive(Debug, Clone, PartialEq)]
pub enum EngineError {
    /// Saturation detection needs at least `2 * window` samples.
    SeriesTooShort { len: usize, window: usize },
    /// The scaling fit needs at least three points.
    TooFewPoints { got: usize, need: usize },
    BadConfig(String),
}

impl fmt::Display for EngineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EngineError::SeriesTooShort { len, window } => write!(
                f,
                "series of {len} samples is too short for window {window} (need {})",
                2 * window
            ),
            EngineError::TooFewPoints { got, need } => {
                write!(f, "scaling fit needs {need} points, got {got}")
            }
            EngineError::BadConfig(msg) => write!(f, "invalid configuration: {msg}"),
        }
    }
}

impl std::error::Error for EngineError {}

/// How a quenched per-agent parameter vector is produced.
#[derive(Debug, Clone, PartialEq)]
pub enum ParamSpec {
    /// Every agent gets the same value.
    Homogeneous(f64),
    /// One uniform draw per agent from the replica stream, agents `0..n`.
    QuenchedUniform,
    /// Caller-supplied values, length must match the population.
    Explicit(Vec<f64>),
}

impl ParamSpec {
    fn resolve<R: Rng>(&self, n: usize, rng: &mut R) -> Result<Vec<f64>, EngineError> {
        match self {
            ParamSpec::Homogeneous(v) => Ok(vec![*v; n]),
            ParamSpec::QuenchedUniform => Ok((0..n).map(|_| rng.gen::<f64>()).collect()),
            ParamSpec::Explicit(values) => {
                if values.len() != n {
                    return Err(EngineError::BadConfig(format!(
                        "explicit parameter vector has {} entries for {n} agents",
                        values.len()
                    )));
                }
                Ok(values.clone())
            }
        }
    }

    fn validate(&self, name: &str) -> Result<(), EngineError> {
        let check = |v: f64| -> Result<(), EngineError> {
            if v.is_finite() && (0.0..=1.0).contains(&v) {
                Ok(())
            } else {
                Err(EngineError::BadConfig(format!(
                    "{name} must lie in [0, 1], got {v}"
                )))
            }
        };
        match self {
            ParamSpec::Homogeneous(v) => check(*v),
            ParamSpec::QuenchedUniform => Ok(()),
            ParamSpec::Explicit(values) => values.iter().copied().try_for_each(check),
        }
    }
}

/// Which economy to run, before quenched parameters are resolved.
///
/// [`ModelConfig::resolve`] turns this into a concrete [`ModelSpec`] for
/// one replica, drawing any quenched vectors from the replica stream; the
/// resolved parameters then stay fixed for that replica's lifetime.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelConfig {
    PureYs,
    PureTf,
    MixedAgents { tf_agents: BTreeSet<usize> },
    SplitWealth { lambdas: ParamSpec, mode: SplitMode },
    ProbabilisticChoice {
        ps: ParamSpec,
        disagreement: DisagreementPolicy,
    },
}

impl ModelConfig {
    pub fn validate(&self, n_agents: usize) -> Result<(), EngineError> {
        match self {
            ModelConfig::PureYs | ModelConfig::PureTf => Ok(()),
            ModelConfig::MixedAgents { tf_agents } => {
                if tf_agents.is_empty() {
                    return Err(EngineError::BadConfig("tf_agents must be non-empty".into()));
                }
                if let Some(&bad) = tf_agents.iter().find(|&&a| a >= n_agents) {
                    return Err(EngineError::BadConfig(format!(
                        "tf_agents index {bad} out of range for {n_agents} agents"
                    )));
                }
                Ok(())
            }
            ModelConfig::SplitWealth { lambdas, .. } => lambdas.validate("lambda"),
            ModelConfig::ProbabilisticChoice { ps, .. } => ps.validate("p"),
        }
    }

    /// Resolve quenched parameters for one replica.
    pub fn resolve<R: Rng>(&self, n: usize, rng: &mut R) -> Result<ModelSpec, EngineError> {
        let spec = match self {
            ModelConfig::PureYs => ModelSpec::PureYs,
            ModelConfig::PureTf => ModelSpec::PureTf,
            ModelConfig::MixedAgents { tf_agents } => ModelSpec::MixedAgents {
                tf_agents: tf_agents.clone(),
            },
            ModelConfig::SplitWealth { lambdas, mode } => ModelSpec::SplitWealth {
                lambdas: lambdas.resolve(n, rng)?,
                mode: *mode,
            },
            ModelConfig::ProbabilisticChoice { ps, disagreement } => {
                ModelSpec::ProbabilisticChoice {
                    ps: ps.resolve(n, rng)?,
                    disagreement: *disagreement,
                }
            }
        };
        spec.validate(n)
            .map_err(|e| EngineError::BadConfig(e.to_string()))?;
        Ok(spec)
    }
}

/// When the richest-agent wealth is sampled.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RecordSchedule {
    /// Every `every` steps.
    Linear { every: u64 },
    /// Step counts growing by `factor` (at least one step apart), which
    /// keeps series compact over long runs.
    Geometric { factor: f64 },
}

impl RecordSchedule {
    fn validate(&self) -> Result<(), EngineError> {
        match self {
            RecordSchedule::Linear { every } if *every >= 1 => Ok(()),
            RecordSchedule::Linear { every } => Err(EngineError::BadConfig(format!(
                "record_every must be at least 1, got {every}"
            ))),
            RecordSchedule::Geometric { factor } if *factor > 1.0 && factor.is_finite() => Ok(()),
            RecordSchedule::Geometric { factor } => Err(EngineError::BadConfig(format!(
                "record_factor must exceed 1, got {factor}"
            ))),
        }
    }
}

/// Sampling times for a schedule: always step 0 and `max_steps`, plus the
/// schedule's interior points.
pub fn record_times(schedule: RecordSchedule, max_steps: u64) -> Vec<u64> {
    let mut times = vec![0u64];
    match schedule {
        RecordSchedule::Linear { every } => {
            let mut t = every;
            while t < max_steps {
                times.push(t);
                t += every;
            }
        }
        RecordSchedule::Geometric { factor } => {
            let mut t = 1u64;
            while t < max_steps {
                times.push(t);
                t = ((t as f64) * factor).floor().max((t + 1) as f64) as u64;
            }
        }
    }
    if *times.last().unwrap() != max_steps {
        times.push(max_steps);
    }
    times
}

/// A complete run description: population, economy, budget, seeding, and
/// sampling. `(config, seed)` fully determines every output.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub n_agents: usize,
    /// Total money `M`; conventionally `n_agents` so the mean wealth is 1.
    pub total_money: f64,
    pub model: ModelConfig,
    pub max_steps: u64,
    pub seed: u64,
    pub ensemble_size: usize,
    pub record: RecordSchedule,
}

impl SimConfig {
    pub fn validate(&self) -> Result<(), EngineError> {
        if self.n_agents < 2 {
            return Err(EngineError::BadConfig(format!(
                "n_agents must be at least 2, got {}",
                self.n_agents
            )));
        }
        if !(self.total_money.is_finite() && self.total_money > 0.0) {
            return Err(EngineError::BadConfig(format!(
                "total_money must be positive, got {}",
                self.total_money
            )));
        }
        if self.max_steps < 1 {
            return Err(EngineError::BadConfig("max_steps must be at least 1".into()));
        }
        if self.ensemble_size < 1 {
            return Err(EngineError::BadConfig(
                "ensemble_size must be at least 1".into(),
            ));
        }
        self.record.validate()?;
        self.model.validate(self.n_agents)
    }

    /// Average money per agent, `M / N`.
    pub fn per_capita(&self) -> f64 {
        self.total_money / self.n_agents as f64
    }
}

/// Equal division of the total money among the agents.
pub fn init_population(config: &SimConfig) -> WealthVector {
    WealthVector::equal_split(config.n_agents, config.total_money)
}

/// The RNG for one replica: master seed keys the generator, the replica
/// index selects the stream.
pub fn replica_rng(seed: u64, replica: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replica);
    rng
}

/// Advance the economy by one transaction (one time step).
///
/// Draws follow the module-level contract. Under the `Skip` disagreement
/// policy a disagreeing pair leaves the state unchanged but still consumes
/// the step.
pub fn step<R: Rng>(state: &mut WealthVector, model: &ModelSpec, rng: &mut R) {
    let n = state.len();
    let i = rng.gen_range(0..n);
    let mut j = rng.gen_range(0..n - 1);
    if j >= i {
        j += 1;
    }

    match model {
        ModelSpec::SplitWealth { lambdas, mode } => match mode {
            SplitMode::Coupled => {
                let alpha = rng.gen::<f64>();
                let winner = if rng.gen::<bool>() { i } else { j };
                let txn = Transaction {
                    i,
                    j,
                    alpha,
                    winner,
                    rule_draws: None,
                };
                let rule = StakeRule::Split {
                    lambda_i: lambdas[i],
                    lambda_j: lambdas[j],
                };
                apply_transaction(state, &txn, rule).expect("valid transaction");
            }
            SplitMode::Independent => {
                let ys_alpha = rng.gen::<f64>();
                let ys_winner = if rng.gen::<bool>() { i } else { j };
                let tf_alpha = rng.gen::<f64>();
                let tf_winner = if rng.gen::<bool>() { i } else { j };
                let draws = SplitDraws {
                    ys_alpha,
                    ys_winner,
                    tf_alpha,
                    tf_winner,
                };
                apply_split_independent(state, i, j, lambdas[i], lambdas[j], draws)
                    .expect("valid transaction");
            }
        },
        _ => {
            let rule_draws = match model {
                ModelSpec::ProbabilisticChoice { .. } => {
                    Some((rng.gen::<f64>(), rng.gen::<f64>()))
                }
                _ => None,
            };
            let rule = match choose_rule(model, i, j, rule_draws) {
                RuleChoice::Trade(rule) => rule,
                RuleChoice::Skip => return,
            };
            let alpha = rng.gen::<f64>();
            let winner = if rng.gen::<bool>() { i } else { j };
            let txn = Transaction {
                i,
                j,
                alpha,
                winner,
                rule_draws,
            };
            apply_transaction(state, &txn, StakeRule::Exchange(rule)).expect("valid transaction");
        }
    }
}

/// One replica's sampled richest-wealth trajectory and final state.
#[derive(Debug, Clone)]
pub struct ReplicaRun {
    pub times: Vec<u64>,
    pub richest: Vec<f64>,
    pub final_state: WealthVector,
}

/// Run one replica to `max_steps`. Deterministic given `(config, replica)`.
pub fn run_replica(config: &SimConfig, replica: u64) -> Result<ReplicaRun, EngineError> {
    config.validate()?;
    let mut rng = replica_rng(config.seed, replica);
    let model = config.model.resolve(config.n_agents, &mut rng)?;
    let mut state = init_population(config);

    let times = record_times(config.record, config.max_steps);
    let mut richest = Vec::with_capacity(times.len());
    let mut next_record = 0usize;
    if times[next_record] == 0 {
        richest.push(state.richest());
        next_record += 1;
    }
    for t in 1..=config.max_steps {
        step(&mut state, &model, &mut rng);
        if next_record < times.len() && times[next_record] == t {
            richest.push(state.richest());
            next_record += 1;
        }
    }
    debug_assert_eq!(richest.len(), times.len());
    Ok(ReplicaRun {
        times,
        richest,
        final_state: state,
    })
}

/// Ensemble-averaged richest-agent wealth over recorded times.
#[derive(Debug, Clone, PartialEq)]
pub struct RichestSeries {
    pub times: Vec<u64>,
    pub values: Vec<f64>,
}

impl RichestSeries {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// Pointwise-averaged richest series plus the final wealths of every
/// replica pooled in replica order.
#[derive(Debug, Clone)]
pub struct EnsembleRun {
    pub series: RichestSeries,
    pub pooled_final_wealths: Vec<f64>,
    pub replicas: usize,
}

/// Run `ensemble_size` replicas (streams `0..ensemble_size`) and reduce.
/// Replicas execute in parallel; the reduction is index-ordered, so the
/// result is independent of scheduling.
pub fn run_ensemble(config: &SimConfig) -> Result<EnsembleRun, EngineError> {
    config.validate()?;
    let runs: Vec<ReplicaRun> = (0..config.ensemble_size as u64)
        .into_par_iter()
        .map(|r| run_replica(config, r))
        .collect::<Result<_, _>>()?;
    Ok(reduce_replicas(&runs))
}

/// Index-ordered reduction used by [`run_ensemble`]; exposed so callers
/// can combine replicas they ran themselves.
pub fn reduce_replicas(runs: &[ReplicaRun]) -> EnsembleRun {
    assert!(!runs.is_empty(), "ensemble must contain at least one replica");
    let times = runs[0].times.clone();
    let mut values = vec![0.0; times.len()];
    let mut pooled = Vec::with_capacity(runs.len() * runs[0].final_state.len());
    for run in runs {
        assert_eq!(run.times, times, "replicas must share a schedule");
        for (acc, v) in values.iter_mut().zip(&run.richest) {
            *acc += v;
        }
        pooled.extend_from_slice(run.final_state.as_slice());
    }
    let inv = 1.0 / runs.len() as f64;
    for v in &mut values {
        *v *= inv;
    }
    EnsembleRun {
        series: RichestSeries { times, values },
        pooled_final_wealths: pooled,
        replicas: runs.len(),
    }
}

/// Saturation point of a richest-wealth series.
#[derive(Debug, Clone, PartialEq)]
pub struct SaturationResult {
    pub t_c: u64,
    pub saturated_value: f64,
    pub criterion_window: usize,
    pub criterion_tolerance: f64,
}

/// Earliest recorded time after which every windowed mean of the series
/// stays within `tolerance` (relative) of the windowed mean at that time.
///
/// Windows are `window` consecutive samples, anchored at their first
/// sample. A candidate must be followed by at least half a window of
/// further window positions, so a series that keeps rising to the end
/// reports `None` rather than trivially accepting its last window.
pub fn detect_saturation(
    series: &RichestSeries,
    window: usize,
    tolerance: f64,
) -> Result<Option<SaturationResult>, EngineError> {
    if window == 0 {
        return Err(EngineError::BadConfig("window must be positive".into()));
    }
    let len = series.values.len();
    if len < 2 * window {
        return Err(EngineError::SeriesTooShort { len, window });
    }

    let n_means = len - window + 1;
    let mut prefix = vec![0.0; len + 1];
    for (k, v) in series.values.iter().enumerate() {
        prefix[k + 1] = prefix[k] + v;
    }
    let means: Vec<f64> = (0..n_means)
        .map(|k| (prefix[k + window] - prefix[k]) / window as f64)
        .collect();

    let mut suffix_min = vec![f64::INFINITY; n_means];
    let mut suffix_max = vec![f64::NEG_INFINITY; n_means];
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for k in (0..n_means).rev() {
        lo = lo.min(means[k]);
        hi = hi.max(means[k]);
        suffix_min[k] = lo;
        suffix_max[k] = hi;
    }

    let guard = window.div_ceil(2);
    for k0 in 0..=(n_means - 1 - guard) {
        let m0 = means[k0];
        let band = tolerance * m0;
        if suffix_max[k0] - m0 <= band && m0 - suffix_min[k0] <= band {
            let tail = &series.values[k0..];
            let saturated_value = tail.iter().sum::<f64>() / tail.len() as f64;
            return Ok(Some(SaturationResult {
                t_c: series.times[k0],
                saturated_value,
                criterion_window: window,
                criterion_tolerance: tolerance,
            }));
        }
    }
    Ok(None)
}

/// Power-law fit `t_c(N) = a * N^b`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingFit {
    pub a: f64,
    pub b: f64,
    pub r_squared: f64,
}

/// Least squares of `ln t_c` on `ln N` over `(n, t_c)` points.
pub fn fit_scaling(points: &[(f64, f64)]) -> Result<ScalingFit, EngineError> {
    if points.len() < 3 {
        return Err(EngineError::TooFewPoints {
            got: points.len(),
            need: 3,
        });
    }
    let xs: Vec<f64> = points.iter().map(|(n, _)| n.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|(_, t)| t.ln()).collect();
    let n = xs.len() as f64;
    let x_mean = xs.iter().sum::<f64>() / n;
    let y_mean = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - x_mean) * (x - x_mean)).sum();
    let sxy: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - x_mean) * (y - y_mean))
        .sum();
    if sxx == 0.0 {
        return Err(EngineError::BadConfig(
            "scaling fit needs distinct population sizes".into(),
        ));
    }
    let b = sxy / sxx;
    let intercept = y_mean - b * x_mean;
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let r = y - (intercept + b * x);
            r * r
        })
        .sum();
    let ss_tot: f64 = ys.iter().map(|y| (y - y_mean) * (y - y_mean)).sum();
    let r_squared = if ss_tot > 0.0 { 1.0 - ss_res / ss_tot } else { 1.0 };
    Ok(ScalingFit {
        a: intercept.exp(),
        b,
        r_squared,
    })
}

/// Saturation time for one population size in a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub n_agents: usize,
    pub t_c: u64,
    pub saturated_value: f64,
}

#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub points: Vec<SweepPoint>,
    /// Population sizes whose series never saturated within the budget.
    pub unsaturated: Vec<usize>,
    pub fit: ScalingFit,
}

/// Run an ensemble per population size, detect each saturation time, and
/// fit `t_c(N) = a * N^b`.
///
/// The template's per-capita money is preserved (`total_money` scales with
/// `N`) and each size runs under seed `template.seed + N` so sweeps never
/// reuse a stream across sizes. Sizes that fail to saturate are excluded
/// and reported; the fit proceeds when at least three points survive.
pub fn sweep_tc(
    template: &SimConfig,
    n_values: &[usize],
    window: usize,
    tolerance: f64,
) -> Result<SweepOutcome, EngineError> {
    let mut distinct: Vec<usize> = n_values.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() < 3 {
        return Err(EngineError::TooFewPoints {
            got: distinct.len(),
            need: 3,
        });
    }

    let per_capita = template.per_capita();
    let mut points = Vec::new();
    let mut unsaturated = Vec::new();
    for &n in &distinct {
        let config = SimConfig {
            n_agents: n,
            total_money: per_capita * n as f64,
            seed: template.seed.wrapping_add(n as u64),
            ..template.clone()
        };
        let ensemble = run_ensemble(&config)?;
        match detect_saturation(&ensemble.series, window, tolerance)? {
            Some(sat) => points.push(SweepPoint {
                n_agents: n,
                t_c: sat.t_c.max(1),
                saturated_value: sat.saturated_value,
            }),
            None => unsaturated.push(n),
        }
    }

    let fit_points: Vec<(f64, f64)> = points
        .iter()
        .map(|p| (p.n_agents as f64, p.t_c as f64))
        .collect();
    let fit = fit_scaling(&fit_points)?;
    Ok(SweepOutcome {
        points,
        unsaturated,
        fit,
    })
}
