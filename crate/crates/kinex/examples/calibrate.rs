// scratch calibration runner (not part of the curated examples; removed later)
use kinex::engine::*;
use kinex::exchange::{DisagreementPolicy, SplitMode};
use kinex::stats::*;
use std::time::Instant;

fn config(n: usize, model: ModelConfig, steps: u64, reps: usize, seed: u64) -> SimConfig {
    SimConfig {
        n_agents: n,
        total_money: n as f64,
        model,
        max_steps: steps,
        seed,
        ensemble_size: reps,
        record: RecordSchedule::Geometric { factor: 1.1 },
    }
}

fn nu_of(fit: &FitResult) -> f64 {
    match fit.params {
        FitParams::PowerLaw { exponent, .. } => exponent,
        _ => f64::NAN,
    }
}

fn quantile(sorted: &[f64], p: f64) -> f64 {
    sorted[(((sorted.len() - 1) as f64) * p).round() as usize]
}

fn positive_sorted(pooled: &[f64]) -> Vec<f64> {
    let mut v: Vec<f64> = pooled.iter().copied().filter(|&x| x > 0.0).collect();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v
}

fn model_a() -> ModelConfig {
    ModelConfig::MixedAgents { tf_agents: [0usize].into_iter().collect() }
}
fn model_ba() -> ModelConfig {
    ModelConfig::SplitWealth { lambdas: ParamSpec::Homogeneous(0.999), mode: SplitMode::Coupled }
}
fn model_bb() -> ModelConfig {
    ModelConfig::SplitWealth { lambdas: ParamSpec::QuenchedUniform, mode: SplitMode::Coupled }
}
fn model_c() -> ModelConfig {
    ModelConfig::ProbabilisticChoice { ps: ParamSpec::QuenchedUniform, disagreement: DisagreementPolicy::FallbackYs }
}

fn cache_path(label: &str, n: usize) -> String {
    format!("/tmp/sweepcache/{label}_{n}.tsv")
}

fn save_series(label: &str, n: usize, series: &RichestSeries) {
    std::fs::create_dir_all("/tmp/sweepcache").unwrap();
    let mut text = String::new();
    for (t, v) in series.times.iter().zip(&series.values) {
        text.push_str(&format!("{t}\t{v}\n"));
    }
    std::fs::write(cache_path(label, n), text).unwrap();
}

fn load_series(label: &str, n: usize) -> Option<RichestSeries> {
    let text = std::fs::read_to_string(cache_path(label, n)).ok()?;
    let mut times = Vec::new();
    let mut values = Vec::new();
    for line in text.lines() {
        let (t, v) = line.split_once('\t')?;
        times.push(t.parse().ok()?);
        values.push(v.parse().ok()?);
    }
    Some(RichestSeries { times, values })
}

fn detector_grid(label: &str, per_n: &[(usize, RichestSeries)]) {
    for (window, tol) in [
        (40usize, 0.05),
        (40, 0.08),
        (40, 0.10),
        (40, 0.12),
        (60, 0.05),
        (60, 0.08),
        (60, 0.10),
        (60, 0.12),
        (100, 0.05),
        (100, 0.08),
        (100, 0.10),
    ] {
        let mut pts = Vec::new();
        let mut unsat = Vec::new();
        for (n, series) in per_n {
            match detect_saturation(series, window, tol).unwrap() {
                Some(s) => pts.push((*n as f64, s.t_c.max(1) as f64)),
                None => unsat.push(*n),
            }
        }
        match fit_scaling(&pts) {
            Ok(fit) => {
                let tcs: Vec<String> = pts.iter().map(|(n, t)| format!("{n}:{t:.0}")).collect();
                println!(
                    "{label} w={window} tol={tol}: b={:.3} a={:.3} R2={:.4} [{}] unsat={unsat:?}",
                    fit.b, fit.a, fit.r_squared, tcs.join(" ")
                );
            }
            Err(e) => println!("{label} w={window} tol={tol}: fit failed ({e}) unsat={unsat:?}"),
        }
    }
}

// run per-N ensembles once with fine geometric recording (cached to
// /tmp/sweepcache), detect at several settings
fn sweep_scan(label: &str, model: ModelConfig, n_values: &[usize], steps: u64, reps: usize, seed: u64) {
    let t0 = Instant::now();
    let mut per_n: Vec<(usize, RichestSeries)> = Vec::new();
    for &n in n_values {
        if let Some(series) = load_series(label, n) {
            per_n.push((n, series));
            continue;
        }
        let cfg = SimConfig {
            n_agents: n,
            total_money: n as f64,
            model: model.clone(),
            max_steps: steps,
            seed: seed.wrapping_add(n as u64),
            ensemble_size: reps,
            record: RecordSchedule::Geometric { factor: 1.02 },
        };
        let ens = run_ensemble(&cfg).unwrap();
        save_series(label, n, &ens.series);
        per_n.push((n, ens.series));
    }
    detector_grid(label, &per_n);
    // plateau character: windowed means of every series
    for (n, series) in &per_n {
        let w = 40usize;
        let means: Vec<(u64, f64)> = (0..series.values.len() - w)
            .step_by((series.values.len() - w) / 20)
            .map(|k| {
                let m = series.values[k..k + w].iter().sum::<f64>() / w as f64;
                (series.times[k], m)
            })
            .collect();
        let tail: Vec<String> = means.iter().map(|(t, m)| format!("{t}:{m:.3}")).collect();
        println!("{label} N={n} windowed means: {}", tail.join(" "));
    }
    println!("  ({:.1?})", t0.elapsed());
}

fn tail_scan(label: &str, pooled: &[f64], windows: &[(&str, f64, f64)]) {
    let hist = LogHistogram::log_binned(pooled, 10).unwrap();
    for (name, lo, hi) in windows {
        match (fit_power_law(&hist, *lo, *hi), fit_lognormal(&hist, *lo, *hi)) {
            (Ok(p), Ok(l)) => println!(
                "  {label} [{name}] ({lo:.3e}..{hi:.3e}) nu={:.3} R2={:.4} bins={} | logn R2={:.4}",
                nu_of(&p), p.r_squared, p.bins_used, l.r_squared
            ),
            (p, l) => println!("  {label} [{name}] power={p:?} logn={l:?}"),
        }
    }
}

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let stage = args.get(1).map(|s| s.as_str()).unwrap_or("tf2");

    match stage {
        "tf2" => {
            for seed in [11u64, 101, 201] {
                let cfg = config(100, ModelConfig::PureTf, 1_000_000, 100, seed);
                let ens = run_ensemble(&cfg).unwrap();
                println!("TF seed {seed}:");
                for bpd in [5usize, 6, 8] {
                    let hist = LogHistogram::log_binned(&ens.pooled_final_wealths, bpd).unwrap();
                    for (lo, hi) in [(0.35, 2.2), (0.4, 2.2), (0.4, 2.5), (0.45, 2.5), (0.5, 2.5)] {
                        match fit_exponential(&hist, lo, hi) {
                            Ok(f) => {
                                if let FitParams::Exponential { temperature, .. } = f.params {
                                    println!(
                                        "  bpd={bpd} [{lo}..{hi}] T={temperature:.4} R2={:.4} bins={}",
                                        f.r_squared, f.bins_used
                                    );
                                }
                            }
                            Err(e) => println!("  bpd={bpd} [{lo}..{hi}] err {e}"),
                        }
                    }
                }
            }
        }
        "sweeps" => {
            sweep_scan("A", model_a(), &[50, 100, 200, 400], 10_000_000, 100, 1000);
            sweep_scan("Ba", model_ba(), &[50, 100, 200, 400], 10_000_000, 100, 2000);
            sweep_scan("Bb", model_bb(), &[50, 100, 200, 400], 10_000_000, 100, 3000);
            sweep_scan("C", model_c(), &[100, 200, 400, 800], 6_000_000, 200, 4000);
        }
        "sweeps8" => {
            sweep_scan("Ba", model_ba(), &[100, 200, 400, 800], 10_000_000, 100, 2000);
            sweep_scan("Bb", model_bb(), &[100, 200, 400, 800], 10_000_000, 100, 3000);
        }
        "rescanA" => {
            let per_n: Vec<(usize, RichestSeries)> = [50usize, 100, 200, 400]
                .iter()
                .map(|&n| (n, load_series("A", n).unwrap()))
                .collect();
            for (w, tol) in [(30usize, 0.12), (40, 0.12), (40, 0.15), (40, 0.18), (50, 0.15), (60, 0.15)] {
                let mut pts = Vec::new();
                for (n, s) in &per_n {
                    if let Some(sat) = detect_saturation(s, w, tol).unwrap() {
                        pts.push((*n as f64, sat.t_c.max(1) as f64));
                    }
                }
                if let Ok(fit) = fit_scaling(&pts) {
                    let tcs: Vec<String> =
                        pts.iter().map(|(n, t)| format!("{n}:{t:.0}")).collect();
                    println!(
                        "A w={w} tol={tol}: b={:.3} a={:.3} R2={:.4} [{}]",
                        fit.b, fit.a, fit.r_squared, tcs.join(" ")
                    );
                }
            }
        }
        "ashare" => {
            // criterion-5 style: saturated share across N with the sweep settings
            for n in [50usize, 100, 200] {
                let cfg = SimConfig {
                    n_agents: n,
                    total_money: n as f64,
                    model: model_a(),
                    max_steps: 2_000_000,
                    seed: 17,
                    ensemble_size: 300,
                    record: RecordSchedule::Geometric { factor: 1.04 },
                };
                let ens = run_ensemble(&cfg).unwrap();
                for (w, tol) in [(40usize, 0.02), (40, 0.03)] {
                    match detect_saturation(&ens.series, w, tol).unwrap() {
                        Some(s) => println!(
                            "A share N={n} w={w} tol={tol}: t_c={} share={:.4}",
                            s.t_c,
                            s.saturated_value / cfg.total_money
                        ),
                        None => println!("A share N={n} w={w} tol={tol}: none"),
                    }
                }
            }
        }
        "tfseeds" => {
            for seed in [2u64, 5, 11, 17, 29, 41, 59, 76, 101, 201] {
                let cfg = config(100, ModelConfig::PureTf, 1_000_000, 100, seed);
                let ens = run_ensemble(&cfg).unwrap();
                let hist = LogHistogram::log_binned(&ens.pooled_final_wealths, 5).unwrap();
                match fit_exponential(&hist, 0.4, 2.2) {
                    Ok(f) => {
                        if let FitParams::Exponential { temperature, .. } = f.params {
                            let pass = (temperature - 1.0).abs() <= 0.1 && f.r_squared > 0.98;
                            println!(
                                "TF seed {seed}: T={temperature:.4} R2={:.4} bins={} {}",
                                f.r_squared,
                                f.bins_used,
                                if pass { "PASS" } else { "fail" }
                            );
                        }
                    }
                    Err(e) => println!("TF seed {seed}: err {e}"),
                }
            }
        }
        "c1000" => {
            let t0 = Instant::now();
            let cfg = config(1000, model_c(), 10_000_000, 100, 41);
            let ens = run_ensemble(&cfg).unwrap();
            println!("C N=1000 ({:.1?})", t0.elapsed());
            let sorted = positive_sorted(&ens.pooled_final_wealths);
            let max = sorted[sorted.len() - 1];
            println!(
                "  q90={:.3} q95={:.3} q97={:.3} q98={:.3} q99={:.3} q995={:.3} max={max:.3}",
                quantile(&sorted, 0.90), quantile(&sorted, 0.95), quantile(&sorted, 0.97),
                quantile(&sorted, 0.98), quantile(&sorted, 0.99), quantile(&sorted, 0.995)
            );
            tail_scan("C1000", &ens.pooled_final_wealths, &[
                ("q90..max", quantile(&sorted, 0.90), max),
                ("q95..max", quantile(&sorted, 0.95), max),
                ("q97..max", quantile(&sorted, 0.97), max),
                ("q98..max", quantile(&sorted, 0.98), max),
                ("q99..max", quantile(&sorted, 0.99), max),
                ("4..max", 4.0, max),
                ("5..max", 5.0, max),
                ("6..max", 6.0, max),
                ("5..100", 5.0, 100.0),
            ]);
            let ranks = rank_samples(&ens.pooled_final_wealths);
            let n = ranks.len();
            for (kmin, frac) in [(1usize, 0.05), (10, 0.05), (10, 0.03), (10, 0.02), (30, 0.05)] {
                let kmax = ((n as f64) * frac) as usize;
                let slope = ranks.log_log_slope(kmin, kmax).unwrap();
                println!("  C1000 zipf [{kmin}..{kmax}]: {slope:.4}");
            }
        }
        "c5000" => {
            let t0 = Instant::now();
            let cfg = config(5000, model_c(), 20_000_000, 100, 47);
            let ens = run_ensemble(&cfg).unwrap();
            println!("C N=5000, 2e7 steps ({:.1?})", t0.elapsed());
            let sorted = positive_sorted(&ens.pooled_final_wealths);
            let max = sorted[sorted.len() - 1];
            println!(
                "  q90={:.3} q95={:.3} q97={:.3} q99={:.3} max={max:.3}",
                quantile(&sorted, 0.90), quantile(&sorted, 0.95),
                quantile(&sorted, 0.97), quantile(&sorted, 0.99)
            );
            tail_scan("C5000", &ens.pooled_final_wealths, &[
                ("q90..max", quantile(&sorted, 0.90), max),
                ("q95..max", quantile(&sorted, 0.95), max),
                ("q97..max", quantile(&sorted, 0.97), max),
                ("q99..max", quantile(&sorted, 0.99), max),
                ("4..max", 4.0, max),
                ("5..100", 5.0, 100.0),
            ]);
        }
        "bb2" => {
            let t0 = Instant::now();
            let cfg = config(100, model_bb(), 10_000_000, 300, 31);
            let ens = run_ensemble(&cfg).unwrap();
            println!("B(b) ({:.1?})", t0.elapsed());
            let pooled = &ens.pooled_final_wealths;
            for bpd in [6usize, 8, 10] {
                let hist = LogHistogram::log_binned(pooled, bpd).unwrap();
                for (lo, hi) in [(0.02, 0.4), (0.05, 0.4), (0.05, 0.5), (0.08, 0.5), (0.05, 0.6)] {
                    match fit_exponential(&hist, lo, hi) {
                        Ok(f) => {
                            if let FitParams::Exponential { temperature, .. } = f.params {
                                println!(
                                    "  exp bpd={bpd} [{lo}..{hi}]: T={temperature:.4} R2={:.4} bins={}",
                                    f.r_squared, f.bins_used
                                );
                            }
                        }
                        Err(e) => println!("  exp bpd={bpd} [{lo}..{hi}] err {e}"),
                    }
                }
            }
            let sorted = positive_sorted(pooled);
            let ranks = rank_samples(pooled);
            let n = ranks.len();
            // rank image of the [q90, q99] fit window
            let (k_lo, k_hi) = ((n as f64 * 0.01) as usize, (n as f64 * 0.10) as usize);
            println!(
                "  B(b) zipf [{k_lo}..{k_hi}]: {:.4} (expect -1/(nu-1) with nu from [q90..q99])",
                ranks.log_log_slope(k_lo.max(1), k_hi).unwrap()
            );
            let hist = LogHistogram::log_binned(pooled, 10).unwrap();
            let f = fit_power_law(&hist, quantile(&sorted, 0.90), quantile(&sorted, 0.99)).unwrap();
            println!("  B(b) nu[q90..q99] = {:.4}", nu_of(&f));
        }
        other => eprintln!("unknown stage {other}"),
    }
}
