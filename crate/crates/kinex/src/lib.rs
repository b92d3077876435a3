//! kinex — Monte Carlo simulation and analysis of conservative two-party
//! asset-exchange economies.
//!
//! Agents trade pairwise under two rules: yard-sale (the stake is a
//! random fraction of the poorer party's wealth) and theft-and-fraud (a
//! random fraction of the loser's wealth). Pure yard-sale dynamics
//! condense all wealth into one agent; pure theft-and-fraud relaxes to a
//! Boltzmann-Gibbs-like spread. Mixing the two rules — a few
//! theft-and-fraud agents in a yard-sale crowd, a per-agent split of
//! every stake, or a per-transaction probabilistic choice — produces
//! heavy, power-law-tailed wealth distributions, and this crate exists to
//! simulate those economies and measure their tails.
//!
//! # Modules
//!
//! - [`exchange`] — transaction kernels: stake rules, mixing schemes, and
//!   the conservation/no-debt invariants.
//! - [`engine`] — seeded replicas, parallel ensembles, richest-agent
//!   tracking, saturation detection, and `t_c(N) = a N^b` sweeps.
//! - [`stats`] — log-binned histograms, power-law/lognormal/exponential
//!   fits, Zipf rank data, and the Gini coefficient.
//! - [`io`] — run configs, reproducibility manifests, and the table/report
//!   files behind the `kinex` command-line tool.
//!
//! # Examples
//!
//! Each major capability has a runnable example:
//!
//! ```bash
//! cargo run --release --example condensation         # pure yard-sale collapse
//! cargo run --release --example exponential_market   # pure theft-and-fraud spread
//! cargo run --release --example single_cheater       # one TF agent, power-law tail
//! cargo run --release --example homogeneous_split    # 0.1% TF stake component
//! cargo run --release --example quenched_split       # random per-agent stake splits
//! cargo run --release --example strategy_choice      # probabilistic rule choice
//! cargo run --release --example saturation_scaling   # t_c(N) = a N^b sweep
//! cargo run --release --example zipf_ranks           # rank-size view of a tail
//! cargo run --release --example inequality_tracking  # Gini across the economies
//! ```
//!
//! The thin `kinex` binary drives the same machinery from run-config
//! files (`simulate`, `fit`, `sweep`, `zipf` subcommands); see FORMATS.md
//! for the file contracts.
//!
//! # Reproducibility
//!
//! Everything is deterministic given `(config, seed)`: each replica owns
//! a counter-derived ChaCha stream, ensembles reduce in replica order,
//! and simulation outputs are byte-stable. A run's `manifest.json` embeds
//! the fully resolved config and can be fed back as `--config` to
//! regenerate the data files bit-for-bit.

pub mod engine;
pub mod exchange;
pub mod io;
pub mod stats;

pub use engine::{ModelConfig, ParamSpec, RecordSchedule, SimConfig};
pub use exchange::{DisagreementPolicy, ExchangeRule, ModelSpec, SplitMode, WealthVector};
pub use stats::{FitParams, FitResult, LogHistogram};
