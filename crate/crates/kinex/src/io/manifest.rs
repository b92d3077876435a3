//! Run manifest: everything needed to bit-reproduce a run.

use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde_json::{json, Value};

use super::config::{config_to_json, RunConfig};
use super::CliError;

/// Written next to every simulation output; the embedded config is fully
/// resolved (seed and all applied defaults included) and is accepted back
/// as a config source.
#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub artifact_version: String,
    pub timestamp: String,
    pub config: RunConfig,
    pub output_paths: Vec<String>,
}

impl RunManifest {
    pub fn new(config: RunConfig, output_paths: Vec<String>) -> Self {
        RunManifest {
            artifact_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: iso8601_utc(SystemTime::now()),
            config,
            output_paths,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "artifact_version": self.artifact_version,
            "timestamp": self.timestamp,
            "config": config_to_json(&self.config),
            "output_paths": self.output_paths,
        })
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        let mut text = serde_json::to_string_pretty(&self.to_json())
            .expect("manifest serialization cannot fail");
        text.push('\n');
        std::fs::write(path, text).map_err(|e| super::io_runtime(path, e))
    }
}

/// `SystemTime` as `YYYY-MM-DDThh:mm:ssZ` (civil-from-days conversion).
pub fn iso8601_utc(t: SystemTime) -> String {
    let secs = t
        .duration_since(UNIX_EPOCH)
        .expect("time before epoch")
        .as_secs();
    let days = (secs / 86_400) as i64;
    let rem = secs % 86_400;
    let (h, m, s) = (rem / 3600, (rem % 3600) / 60, rem % 60);

    // days since 1970-01-01 to civil date
    let z = days + 719_468;
    let era = z.div_euclid(146_097);
    let doe = z.rem_euclid(146_097);
    let yoe = (doe - doe / 1460 + doe / 36_524 - doe / 146_096) / 365;
    let y = yoe + era * 400;
    let doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    let mp = (5 * doy + 2) / 153;
    let d = doy - (153 * mp + 2) / 5 + 1;
    let month = if mp < 10 { mp + 3 } else { mp - 9 };
    let year = if month <= 2 { y + 1 } else { y };

    format!("{year:04}-{month:02}-{d:02}T{h:02}:{m:02}:{s:02}Z")
}
