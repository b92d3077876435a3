//! End-to-end checks of the command workflows and the binary's exit-code
//! and diagnostic contract.

mod common;

use std::fs;
use std::path::PathBuf;
use std::process::Command;

use common::{pareto_samples, positive_sorted, quantile};
use kinex::io::{
    cmd_simulate, cmd_sweep, load_config_source, parse_config_str, write_samples, FitKind,
};

fn temp_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("kinex_cli_{name}"));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn kinex() -> Command {
    Command::new(env!("CARGO_BIN_EXE_kinex"))
}

const SMALL_RUN: &str = "
    n_agents = 20
    max_steps = 20000
    seed = 5
    ensemble_size = 3
    record_schedule = linear
    record_every = 1000
    model = pure_tf
";

#[test]
fn simulate_outputs_are_byte_reproducible() {
    let dir = temp_dir("reproducible");
    let config = parse_config_str(SMALL_RUN).unwrap();
    let first = cmd_simulate(&config, &dir.join("a")).unwrap();
    let second = cmd_simulate(&config, &dir.join("b")).unwrap();

    let series_a = fs::read(&first.series_path).unwrap();
    let series_b = fs::read(&second.series_path).unwrap();
    assert_eq!(series_a, series_b);
    let pooled_a = fs::read(&first.pooled_path).unwrap();
    let pooled_b = fs::read(&second.pooled_path).unwrap();
    assert_eq!(pooled_a, pooled_b);

    // manifests agree on everything except the timestamp
    let manifest_a: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&first.manifest_path).unwrap()).unwrap();
    let manifest_b: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&second.manifest_path).unwrap()).unwrap();
    assert_eq!(manifest_a["config"], manifest_b["config"]);
    assert_eq!(manifest_a["output_paths"], manifest_b["output_paths"]);
    assert_eq!(manifest_a["artifact_version"], manifest_b["artifact_version"]);
}

#[test]
fn manifest_regenerates_the_run_bit_for_bit() {
    let dir = temp_dir("manifest_regen");
    let config = parse_config_str(SMALL_RUN).unwrap();
    let first = cmd_simulate(&config, &dir.join("orig")).unwrap();

    let reloaded = load_config_source(&first.manifest_path).unwrap();
    assert_eq!(reloaded, config);
    let second = cmd_simulate(&reloaded, &dir.join("regen")).unwrap();
    assert_eq!(
        fs::read(&first.series_path).unwrap(),
        fs::read(&second.series_path).unwrap()
    );
    assert_eq!(
        fs::read(&first.pooled_path).unwrap(),
        fs::read(&second.pooled_path).unwrap()
    );
}

#[test]
fn pure_ys_run_condenses_through_the_binary() {
    let dir = temp_dir("condense");
    let config_path = dir.join("run.cfg");
    fs::write(
        &config_path,
        "n_agents = 100\nmax_steps = 1000000\nseed = 7\nmodel = pure_ys\n",
    )
    .unwrap();
    let output = kinex()
        .args(["simulate", "--config"])
        .arg(&config_path)
        .arg("--out-dir")
        .arg(&dir)
        .output()
        .unwrap();
    assert!(output.status.success(), "{output:?}");

    let pooled = kinex::io::read_samples(&dir.join("pooled_wealths.tsv")).unwrap();
    let max = pooled.iter().cloned().fold(0.0, f64::max);
    assert!(max / 100.0 > 0.99, "richest share {}", max / 100.0);
}

#[test]
fn missing_required_key_fails_with_usage_code() {
    let dir = temp_dir("missing_key");
    let config_path = dir.join("run.cfg");
    fs::write(&config_path, "max_steps = 1000\nmodel = pure_ys\n").unwrap();
    let output = kinex()
        .args(["simulate", "--config"])
        .arg(&config_path)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("n_agents"), "stderr: {stderr}");
}

#[test]
fn bad_model_parameter_names_the_key() {
    let dir = temp_dir("bad_param");
    let config_path = dir.join("run.cfg");
    fs::write(
        &config_path,
        "n_agents = 10\nmax_steps = 1000\nmodel = mixed_agents\n[mixed_agents]\ntf_agents = 10\n",
    )
    .unwrap();
    let output = kinex()
        .args(["simulate", "--config"])
        .arg(&config_path)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("tf_agents"), "stderr: {stderr}");
}

#[test]
fn fit_compare_ranks_power_law_first_on_pareto_data() {
    let dir = temp_dir("fit_compare");
    let samples = pareto_samples(2.0, 1.0, 200_000, 9);
    let samples_path = dir.join("pareto.tsv");
    write_samples(&samples_path, &samples).unwrap();
    let sorted = positive_sorted(&samples);
    let x_max = quantile(&sorted, 0.999);

    let output = kinex()
        .arg("fit")
        .arg(&samples_path)
        .args(["--compare", "--x-min", "1.0", "--x-max"])
        .arg(format!("{x_max}"))
        .arg("--out-dir")
        .arg(&dir)
        .output()
        .unwrap();
    assert!(output.status.success(), "{output:?}");

    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.join("fit_report.json")).unwrap()).unwrap();
    let fits = report["fits"].as_array().unwrap();
    assert_eq!(fits[0]["form"], "power_law");
    assert_eq!(fits[1]["form"], "lognormal");
    let nu = fits[0]["params"]["exponent"].as_f64().unwrap();
    assert!((nu - 2.0).abs() < 0.05, "nu = {nu}");
    let power_r2 = fits[0]["r_squared"].as_f64().unwrap();
    let logn_r2 = fits[1]["r_squared"].as_f64().unwrap();
    assert!(power_r2 > logn_r2);
    let power_chi2 = fits[0]["chi2_per_dof"].as_f64().unwrap();
    let logn_chi2 = fits[1]["chi2_per_dof"].as_f64().unwrap();
    assert!(power_chi2 < logn_chi2);
}

#[test]
fn single_sample_fit_is_a_runtime_failure() {
    let dir = temp_dir("fit_single");
    let samples_path = dir.join("one.tsv");
    fs::write(&samples_path, "wealth\n1.0\n").unwrap();
    let output = kinex()
        .arg("fit")
        .arg(&samples_path)
        .arg("--out-dir")
        .arg(&dir)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("bins"), "stderr: {stderr}");
}

#[test]
fn sweep_rejects_short_n_list() {
    let dir = temp_dir("sweep_short");
    let config_path = dir.join("run.cfg");
    fs::write(&config_path, SMALL_RUN).unwrap();
    let output = kinex()
        .args(["sweep", "--config"])
        .arg(&config_path)
        .args(["--n-list", "50,100"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn sweep_writes_table_and_fit_report() {
    let dir = temp_dir("sweep_small");
    let mut config = parse_config_str(SMALL_RUN).unwrap();
    // TF relaxes almost immediately; a generous band and a few dozen
    // replicas make the toy sweep deterministic enough to always detect
    config.sim.ensemble_size = 24;
    config.saturation_window = 5;
    config.saturation_tolerance = 0.2;
    let report = cmd_sweep(&config, &[10, 20, 40], &dir).unwrap();
    assert_eq!(report.outcome.points.len(), 3);

    let table = fs::read_to_string(&report.table_path).unwrap();
    assert!(table.starts_with("n_agents\tt_c\tsaturated_value\n"));
    assert_eq!(table.lines().count(), 4);

    let fit: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&report.report_path).unwrap()).unwrap();
    assert!(fit["a"].as_f64().unwrap() > 0.0);
    assert_eq!(fit["config"]["n_agents"], 20);
}

#[test]
fn zipf_orders_and_handles_edges() {
    let dir = temp_dir("zipf");
    let samples_path = dir.join("w.tsv");
    fs::write(&samples_path, "wealth\n1\n3\n2\n").unwrap();
    let output = kinex()
        .arg("zipf")
        .arg(&samples_path)
        .arg("--out-dir")
        .arg(&dir)
        .output()
        .unwrap();
    assert!(output.status.success());
    let table = fs::read_to_string(dir.join("zipf.tsv")).unwrap();
    assert_eq!(table, "rank\twealth\n1\t3\n2\t2\n3\t1\n");

    // single agent: one row
    fs::write(&samples_path, "wealth\n5\n").unwrap();
    let output = kinex()
        .arg("zipf")
        .arg(&samples_path)
        .arg("--out-dir")
        .arg(&dir)
        .output()
        .unwrap();
    assert!(output.status.success());
    let table = fs::read_to_string(dir.join("zipf.tsv")).unwrap();
    assert_eq!(table, "rank\twealth\n1\t5\n");

    // empty input: usage error
    fs::write(&samples_path, "wealth\n").unwrap();
    let output = kinex()
        .arg("zipf")
        .arg(&samples_path)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn unknown_flags_and_subcommands_are_usage_errors() {
    let output = kinex().args(["simulate", "--bogus"]).output().unwrap();
    assert_eq!(output.status.code(), Some(1));
    let output = kinex().arg("frobnicate").output().unwrap();
    assert_eq!(output.status.code(), Some(1));
    let output = kinex().arg("--help").output().unwrap();
    assert_eq!(output.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&output.stdout).contains("USAGE"));
}

#[test]
fn fit_form_names_are_validated() {
    assert!(FitKind::parse("power_law").is_ok());
    assert!(FitKind::parse("gaussian").is_err());
}
