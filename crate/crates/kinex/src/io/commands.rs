//! The four workflows behind the CLI subcommands. Each is an ordinary
//! function so tests and embedders can drive them without a process
//! boundary.

use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use crate::engine::{run_ensemble, sweep_tc, SweepOutcome};
use crate::stats::{
    default_tail_range, fit_exponential, fit_lognormal, fit_power_law, gini, rank_samples,
    FitParams, FitResult, LogHistogram,
};

use super::config::{config_to_json, RunConfig};
use super::manifest::RunManifest;
use super::table;
use super::CliError;

pub const SERIES_FILE: &str = "richest_series.tsv";
pub const POOLED_FILE: &str = "pooled_wealths.tsv";
pub const MANIFEST_FILE: &str = "manifest.json";
pub const FIT_REPORT_FILE: &str = "fit_report.json";
pub const TC_TABLE_FILE: &str = "tc_table.tsv";
pub const SWEEP_REPORT_FILE: &str = "sweep_fit.json";
pub const ZIPF_FILE: &str = "zipf.tsv";

fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| super::io_runtime(dir, e))
}

fn write_json(path: &Path, value: &Value) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("report serialization");
    text.push('\n');
    std::fs::write(path, text).map_err(|e| super::io_runtime(path, e))
}

#[derive(Debug, Clone)]
pub struct SimulateOutcome {
    pub series_path: PathBuf,
    pub pooled_path: PathBuf,
    pub manifest_path: PathBuf,
    /// Final ensemble-averaged richest wealth as a share of the total.
    pub richest_share: f64,
    pub pooled_gini: f64,
}

/// Run the configured ensemble and write the richest-wealth series, the
/// pooled final wealths, and the manifest.
pub fn cmd_simulate(config: &RunConfig, out_dir: &Path) -> Result<SimulateOutcome, CliError> {
    ensure_dir(out_dir)?;
    let ensemble = run_ensemble(&config.sim)?;

    let series_path = out_dir.join(SERIES_FILE);
    let pooled_path = out_dir.join(POOLED_FILE);
    let manifest_path = out_dir.join(MANIFEST_FILE);
    table::write_series(&series_path, &ensemble.series)?;
    table::write_samples(&pooled_path, &ensemble.pooled_final_wealths)?;
    RunManifest::new(
        config.clone(),
        vec![SERIES_FILE.to_string(), POOLED_FILE.to_string()],
    )
    .write(&manifest_path)?;

    let richest_share =
        ensemble.series.values.last().copied().unwrap_or(0.0) / config.sim.total_money;
    let pooled_gini = gini(&ensemble.pooled_final_wealths)?;
    println!(
        "simulate: {} replicas x {} steps, final richest share {:.4}, pooled gini {:.4}",
        ensemble.replicas, config.sim.max_steps, richest_share, pooled_gini
    );
    println!("simulate: wrote {}", out_dir.display());
    Ok(SimulateOutcome {
        series_path,
        pooled_path,
        manifest_path,
        richest_share,
        pooled_gini,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitKind {
    PowerLaw,
    Lognormal,
    Exponential,
}

impl FitKind {
    pub fn name(&self) -> &'static str {
        match self {
            FitKind::PowerLaw => "power_law",
            FitKind::Lognormal => "lognormal",
            FitKind::Exponential => "exponential",
        }
    }

    pub fn parse(name: &str) -> Result<Self, CliError> {
        match name {
            "power_law" => Ok(FitKind::PowerLaw),
            "lognormal" => Ok(FitKind::Lognormal),
            "exponential" => Ok(FitKind::Exponential),
            other => Err(CliError::Usage(format!(
                "unknown fit form `{other}` (expected power_law, lognormal, or exponential)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FitForms {
    One(FitKind),
    /// Power law and lognormal on the same window, comparison-table style.
    Compare,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitRequest {
    pub forms: FitForms,
    pub x_min: Option<f64>,
    pub x_max: Option<f64>,
    pub bins_per_decade: usize,
}

#[derive(Debug, Clone)]
pub struct FitReport {
    pub fits: Vec<(FitKind, FitResult)>,
    pub fit_range: (f64, f64),
    pub report_path: PathBuf,
}

fn params_json(params: &FitParams) -> Value {
    match params {
        FitParams::PowerLaw {
            exponent,
            amplitude,
        } => json!({ "exponent": exponent, "amplitude": amplitude }),
        FitParams::Lognormal { mu, sigma } => json!({ "mu": mu, "sigma": sigma }),
        FitParams::Exponential {
            temperature,
            amplitude,
        } => json!({ "temperature": temperature, "amplitude": amplitude }),
    }
}

fn params_text(params: &FitParams) -> String {
    match params {
        FitParams::PowerLaw {
            exponent,
            amplitude,
        } => format!("exponent={exponent:.4} amplitude={amplitude:.4e}"),
        FitParams::Lognormal { mu, sigma } => format!("mu={mu:.4} sigma={sigma:.4}"),
        FitParams::Exponential {
            temperature,
            amplitude,
        } => format!("temperature={temperature:.4} amplitude={amplitude:.4e}"),
    }
}

/// Fit the requested form(s) to a samples file and write the report.
pub fn cmd_fit(
    samples_path: &Path,
    request: &FitRequest,
    out_dir: &Path,
) -> Result<FitReport, CliError> {
    let samples = table::read_samples(samples_path)?;
    let hist = LogHistogram::log_binned(&samples, request.bins_per_decade)?;
    let (default_lo, default_hi) = default_tail_range(&samples)?;
    let x_min = request.x_min.unwrap_or(default_lo);
    let x_max = request.x_max.unwrap_or(default_hi);

    let kinds: Vec<FitKind> = match &request.forms {
        FitForms::One(kind) => vec![*kind],
        FitForms::Compare => vec![FitKind::PowerLaw, FitKind::Lognormal],
    };
    let mut fits = Vec::new();
    for kind in kinds {
        let fit = match kind {
            FitKind::PowerLaw => fit_power_law(&hist, x_min, x_max)?,
            FitKind::Lognormal => fit_lognormal(&hist, x_min, x_max)?,
            FitKind::Exponential => fit_exponential(&hist, x_min, x_max)?,
        };
        fits.push((kind, fit));
    }

    println!("fit: {} over [{x_min}, {x_max}]", samples_path.display());
    println!(
        "{:<12} {:>14} {:>10}   parameters",
        "fit", "chi2_per_dof", "r_squared"
    );
    for (kind, fit) in &fits {
        println!(
            "{:<12} {:>14.6e} {:>10.4}   {}",
            kind.name(),
            fit.chi2_per_dof,
            fit.r_squared,
            params_text(&fit.params)
        );
    }

    ensure_dir(out_dir)?;
    let report_path = out_dir.join(FIT_REPORT_FILE);
    let fits_json: Vec<Value> = fits
        .iter()
        .map(|(kind, fit)| {
            json!({
                "form": kind.name(),
                "params": params_json(&fit.params),
                "chi2_per_dof": fit.chi2_per_dof,
                "r_squared": fit.r_squared,
                "bins_used": fit.bins_used,
            })
        })
        .collect();
    write_json(
        &report_path,
        &json!({
            "samples": samples_path.display().to_string(),
            "bins_per_decade": request.bins_per_decade,
            "fit_range": [x_min, x_max],
            "fits": fits_json,
        }),
    )?;
    Ok(FitReport {
        fits,
        fit_range: (x_min, x_max),
        report_path,
    })
}

#[derive(Debug, Clone)]
pub struct SweepReport {
    pub outcome: SweepOutcome,
    pub table_path: PathBuf,
    pub report_path: PathBuf,
}

/// Saturation-time sweep over population sizes: per-size table plus the
/// fitted scaling law, with the resolved config embedded for
/// reproducibility.
pub fn cmd_sweep(
    config: &RunConfig,
    n_list: &[usize],
    out_dir: &Path,
) -> Result<SweepReport, CliError> {
    if n_list.len() < 3 {
        return Err(CliError::Usage(format!(
            "--n-list needs at least 3 population sizes, got {}",
            n_list.len()
        )));
    }
    let outcome = sweep_tc(
        &config.sim,
        n_list,
        config.saturation_window,
        config.saturation_tolerance,
    )?;
    for n in &outcome.unsaturated {
        eprintln!("warning: N = {n} did not saturate within {} steps", config.sim.max_steps);
    }
    for p in &outcome.points {
        println!(
            "sweep: N={:<6} t_c={:<10} saturated_value={:.6}",
            p.n_agents, p.t_c, p.saturated_value
        );
    }
    println!(
        "sweep: t_c(N) = a N^b with a={:.4} b={:.4} (R2={:.4})",
        outcome.fit.a, outcome.fit.b, outcome.fit.r_squared
    );

    ensure_dir(out_dir)?;
    let table_path = out_dir.join(TC_TABLE_FILE);
    table::write_sweep_points(&table_path, &outcome.points)?;
    let report_path = out_dir.join(SWEEP_REPORT_FILE);
    let points: Vec<Value> = outcome
        .points
        .iter()
        .map(|p| json!({ "n_agents": p.n_agents, "t_c": p.t_c, "saturated_value": p.saturated_value }))
        .collect();
    write_json(
        &report_path,
        &json!({
            "a": outcome.fit.a,
            "b": outcome.fit.b,
            "r_squared": outcome.fit.r_squared,
            "points": points,
            "unsaturated": outcome.unsaturated,
            "n_list": n_list,
            "config": config_to_json(config),
        }),
    )?;
    Ok(SweepReport {
        outcome,
        table_path,
        report_path,
    })
}

/// Rank a samples file by wealth and write the `(rank, wealth)` table.
pub fn cmd_zipf(input: &Path, out_dir: &Path) -> Result<PathBuf, CliError> {
    let samples = table::read_samples(input)?;
    let ranks = rank_samples(&samples);
    ensure_dir(out_dir)?;
    let path = out_dir.join(ZIPF_FILE);
    table::write_zipf_table(&path, &ranks)?;
    println!(
        "zipf: {} entries, top wealth {}",
        ranks.len(),
        ranks.wealths().first().copied().unwrap_or(0.0)
    );
    Ok(path)
}
