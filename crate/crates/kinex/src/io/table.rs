//! Headered tab-separated tables. All floats print with Rust's shortest
//! round-trip formatting, so files are byte-stable across runs.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::engine::{RichestSeries, SweepPoint};
use crate::stats::RankList;

use super::CliError;

fn writer(path: &Path) -> Result<BufWriter<File>, CliError> {
    Ok(BufWriter::new(
        File::create(path).map_err(|e| super::io_runtime(path, e))?,
    ))
}

fn flush(mut w: BufWriter<File>, path: &Path) -> Result<(), CliError> {
    w.flush().map_err(|e| super::io_runtime(path, e))
}

pub fn write_series(path: &Path, series: &RichestSeries) -> Result<(), CliError> {
    let mut w = writer(path)?;
    writeln!(w, "step\tmean_richest_wealth").map_err(|e| super::io_runtime(path, e))?;
    for (t, v) in series.times.iter().zip(&series.values) {
        writeln!(w, "{t}\t{v}").map_err(|e| super::io_runtime(path, e))?;
    }
    flush(w, path)
}

pub fn write_samples(path: &Path, samples: &[f64]) -> Result<(), CliError> {
    let mut w = writer(path)?;
    writeln!(w, "wealth").map_err(|e| super::io_runtime(path, e))?;
    for v in samples {
        writeln!(w, "{v}").map_err(|e| super::io_runtime(path, e))?;
    }
    flush(w, path)
}

pub fn write_zipf_table(path: &Path, ranks: &RankList) -> Result<(), CliError> {
    let mut w = writer(path)?;
    writeln!(w, "rank\twealth").map_err(|e| super::io_runtime(path, e))?;
    for (rank, wealth) in ranks.iter() {
        writeln!(w, "{rank}\t{wealth}").map_err(|e| super::io_runtime(path, e))?;
    }
    flush(w, path)
}

pub fn write_sweep_points(path: &Path, points: &[SweepPoint]) -> Result<(), CliError> {
    let mut w = writer(path)?;
    writeln!(w, "n_agents\tt_c\tsaturated_value").map_err(|e| super::io_runtime(path, e))?;
    for p in points {
        writeln!(w, "{}\t{}\t{}", p.n_agents, p.t_c, p.saturated_value)
            .map_err(|e| super::io_runtime(path, e))?;
    }
    flush(w, path)
}

/// Read one wealth per line, tolerating a single header row and blank
/// lines. The first column of tab-separated rows is used.
pub fn read_samples(path: &Path) -> Result<Vec<f64>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| super::io_usage(path, e))?;
    let mut samples = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let field = line.split('\t').next().unwrap_or("").trim();
        if field.is_empty() {
            continue;
        }
        match field.parse::<f64>() {
            Ok(v) => samples.push(v),
            Err(_) if lineno == 0 => continue, // header
            Err(_) => {
                return Err(CliError::Usage(format!(
                    "{}: line {}: cannot parse `{field}` as a number",
                    path.display(),
                    lineno + 1
                )))
            }
        }
    }
    if samples.is_empty() {
        return Err(CliError::Usage(format!(
            "{}: no samples in file",
            path.display()
        )));
    }
    Ok(samples)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_round_trip() {
        let dir = std::env::temp_dir().join("kinex_table_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("samples.tsv");
        let values = vec![1.0, 0.1234567890123456, 3e-12, 98.7];
        write_samples(&path, &values).unwrap();
        let back = read_samples(&path).unwrap();
        assert_eq!(values, back);
    }

    #[test]
    fn read_samples_reports_bad_lines() {
        let dir = std::env::temp_dir().join("kinex_table_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("bad.tsv");
        std::fs::write(&path, "wealth\n1.0\nnot-a-number\n").unwrap();
        let err = read_samples(&path).unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
        std::fs::write(&path, "wealth\n").unwrap();
        let err = read_samples(&path).unwrap_err();
        assert!(err.to_string().contains("no samples"), "{err}");
    }
}
