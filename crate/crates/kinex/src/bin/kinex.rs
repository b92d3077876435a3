use std::path::PathBuf;
use std::process::exit;

use kinex::io::{
    cmd_fit, cmd_simulate, cmd_sweep, cmd_zipf, load_config_source, CliError, FitForms, FitKind,
    FitRequest,
};
use kinex::stats::DEFAULT_BINS_PER_DECADE;

const USAGE: &str = "\
kinex — Monte Carlo simulator for two-party wealth-exchange economies

USAGE:
  kinex simulate --config FILE [--seed N] [--out-dir DIR] [--threads K]
  kinex fit SAMPLES [--form FORM | --compare] [--x-min V] [--x-max V]
                    [--bins-per-decade K] [--out-dir DIR]
  kinex sweep --config FILE --n-list N1,N2,N3[,..] [--seed N]
                    [--out-dir DIR] [--threads K]
  kinex zipf SAMPLES [--out-dir DIR]

FLAGS:
  --config FILE         run configuration (key-value text, config JSON,
                        or a manifest.json from an earlier run)
  --seed N              override the config seed
  --out-dir DIR         output directory (default .)
  --threads K           replica parallelism degree (default: all cores)
  --form FORM           power_law | lognormal | exponential (default power_law)
  --compare             fit power_law and lognormal on the same window
  --x-min V, --x-max V  fit window (default: 0.9 wealth quantile to max)
  --bins-per-decade K   histogram resolution (default 10)
  --n-list LIST         comma-separated population sizes for sweep

File formats are described in FORMATS.md. Exit codes: 0 success,
1 usage or config error, 2 runtime or numerical failure.
";

struct Flags {
    config: Option<PathBuf>,
    seed: Option<u64>,
    out_dir: PathBuf,
    threads: Option<usize>,
    form: Option<String>,
    compare: bool,
    x_min: Option<f64>,
    x_max: Option<f64>,
    bins_per_decade: usize,
    n_list: Option<Vec<usize>>,
    positional: Vec<String>,
}

fn parse_flags(args: &[String]) -> Result<Flags, CliError> {
    let mut flags = Flags {
        config: None,
        seed: None,
        out_dir: PathBuf::from("."),
        threads: None,
        form: None,
        compare: false,
        x_min: None,
        x_max: None,
        bins_per_decade: DEFAULT_BINS_PER_DECADE,
        n_list: None,
        positional: Vec::new(),
    };
    let mut i = 0;
    let value = |args: &[String], i: &mut usize, name: &str| -> Result<String, CliError> {
        *i += 1;
        args.get(*i)
            .cloned()
            .ok_or_else(|| CliError::Usage(format!("{name} requires a value")))
    };
    while i < args.len() {
        match args[i].as_str() {
            "--config" => flags.config = Some(PathBuf::from(value(args, &mut i, "--config")?)),
            "--seed" => {
                let v = value(args, &mut i, "--seed")?;
                flags.seed = Some(v.parse().map_err(|_| {
                    CliError::Usage(format!("--seed: cannot parse `{v}` as an integer"))
                })?);
            }
            "--out-dir" => flags.out_dir = PathBuf::from(value(args, &mut i, "--out-dir")?),
            "--threads" => {
                let v = value(args, &mut i, "--threads")?;
                flags.threads = Some(
                    v.parse()
                        .map_err(|_| CliError::Usage(format!("--threads: cannot parse `{v}`")))?,
                );
            }
            "--form" => flags.form = Some(value(args, &mut i, "--form")?),
            "--compare" => flags.compare = true,
            "--x-min" => {
                let v = value(args, &mut i, "--x-min")?;
                flags.x_min = Some(
                    v.parse()
                        .map_err(|_| CliError::Usage(format!("--x-min: cannot parse `{v}`")))?,
                );
            }
            "--x-max" => {
                let v = value(args, &mut i, "--x-max")?;
                flags.x_max = Some(
                    v.parse()
                        .map_err(|_| CliError::Usage(format!("--x-max: cannot parse `{v}`")))?,
                );
            }
            "--bins-per-decade" => {
                let v = value(args, &mut i, "--bins-per-decade")?;
                flags.bins_per_decade = v.parse().map_err(|_| {
                    CliError::Usage(format!("--bins-per-decade: cannot parse `{v}`"))
                })?;
            }
            "--n-list" => {
                let v = value(args, &mut i, "--n-list")?;
                let mut list = Vec::new();
                for part in v.split(',') {
                    list.push(part.trim().parse().map_err(|_| {
                        CliError::Usage(format!("--n-list: cannot parse `{part}`"))
                    })?);
                }
                flags.n_list = Some(list);
            }
            other if other.starts_with('-') => {
                return Err(CliError::Usage(format!("unknown flag `{other}`")));
            }
            other => flags.positional.push(other.to_string()),
        }
        i += 1;
    }
    Ok(flags)
}

fn run() -> Result<(), CliError> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let Some(subcommand) = args.first().map(|s| s.as_str()) else {
        print!("{USAGE}");
        return Err(CliError::Usage("missing subcommand".into()));
    };
    if matches!(subcommand, "-h" | "--help" | "help") {
        print!("{USAGE}");
        return Ok(());
    }
    let flags = parse_flags(&args[1..])?;

    if let Some(threads) = flags.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::Runtime(format!("thread pool: {e}")))?;
    }

    let load_run_config = || -> Result<_, CliError> {
        let path = flags
            .config
            .as_ref()
            .ok_or_else(|| CliError::Usage("--config is required".into()))?;
        let mut config = load_config_source(path)?;
        if let Some(seed) = flags.seed {
            config.sim.seed = seed;
        }
        Ok(config)
    };

    match subcommand {
        "simulate" => {
            let config = load_run_config()?;
            cmd_simulate(&config, &flags.out_dir)?;
            Ok(())
        }
        "sweep" => {
            let config = load_run_config()?;
            let n_list = flags
                .n_list
                .as_deref()
                .ok_or_else(|| CliError::Usage("--n-list is required".into()))?;
            cmd_sweep(&config, n_list, &flags.out_dir)?;
            Ok(())
        }
        "fit" => {
            let samples = flags
                .positional
                .first()
                .ok_or_else(|| CliError::Usage("fit requires a samples file".into()))?;
            let forms = if flags.compare {
                FitForms::Compare
            } else {
                let kind = match &flags.form {
                    Some(name) => FitKind::parse(name)?,
                    None => FitKind::PowerLaw,
                };
                FitForms::One(kind)
            };
            let request = FitRequest {
                forms,
                x_min: flags.x_min,
                x_max: flags.x_max,
                bins_per_decade: flags.bins_per_decade,
            };
            cmd_fit(&PathBuf::from(samples), &request, &flags.out_dir)?;
            Ok(())
        }
        "zipf" => {
            let samples = flags
                .positional
                .first()
                .ok_or_else(|| CliError::Usage("zipf requires a samples file".into()))?;
            cmd_zipf(&PathBuf::from(samples), &flags.out_dir)?;
            Ok(())
        }
        other => Err(CliError::Usage(format!(
            "unknown subcommand `{other}` (try --help)"
        ))),
    }
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        exit(e.exit_code());
    }
}
