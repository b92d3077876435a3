//! Run configuration: a flat key-value text format with one section per
//! model variant, plus a JSON mirror used inside manifests.
//!
//! Top-level keys select the population, budget, seeding, and sampling;
//! the `model` key picks the variant and that variant's section supplies
//! its parameters. Every omitted key's default is echoed back when the
//! configuration is serialized, so a manifest always names the exact run.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde_json::{json, Map, Value};

use crate::engine::{ModelConfig, ParamSpec, RecordSchedule, SimConfig};
use crate::exchange::{DisagreementPolicy, SplitMode};

/// A configuration problem, always naming the offending key.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub key: String,
    pub problem: String,
}

impl ConfigError {
    fn new(key: impl Into<String>, problem: impl Into<String>) -> Self {
        ConfigError {
            key: key.into(),
            problem: problem.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config key `{}`: {}", self.key, self.problem)
    }
}

impl std::error::Error for ConfigError {}

/// Fully resolved run description: the simulation config plus the
/// saturation-detector settings used by sweeps.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub sim: SimConfig,
    pub saturation_window: usize,
    pub saturation_tolerance: f64,
}

const MODEL_NAMES: [&str; 5] = [
    "pure_ys",
    "pure_tf",
    "mixed_agents",
    "split_wealth",
    "probabilistic_choice",
];

const TOP_KEYS: [&str; 10] = [
    "n_agents",
    "total_money",
    "max_steps",
    "seed",
    "ensemble_size",
    "record_schedule",
    "record_factor",
    "record_every",
    "saturation_window",
    "saturation_tolerance",
];

/// String key-value view of a parsed config (text or JSON), prior to
/// typed resolution.
#[derive(Debug, Default)]
struct RawConfig {
    top: BTreeMap<String, String>,
    sections: BTreeMap<String, BTreeMap<String, String>>,
}

fn parse_text(text: &str) -> Result<RawConfig, ConfigError> {
    let mut raw = RawConfig::default();
    let mut section: Option<String> = None;
    for (lineno, line) in text.lines().enumerate() {
        let line = match line.find('#') {
            Some(pos) => &line[..pos],
            None => line,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| {
                    ConfigError::new(line, format!("line {}: unterminated section", lineno + 1))
                })?
                .trim()
                .to_string();
            if !MODEL_NAMES.contains(&name.as_str()) {
                return Err(ConfigError::new(
                    &name,
                    format!("line {}: unknown section", lineno + 1),
                ));
            }
            raw.sections.entry(name.clone()).or_default();
            section = Some(name);
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            ConfigError::new(line, format!("line {}: expected `key = value`", lineno + 1))
        })?;
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        match &section {
            None => {
                if key == "model" {
                    if !MODEL_NAMES.contains(&value.as_str()) {
                        return Err(ConfigError::new(
                            "model",
                            format!("unknown model `{value}` (expected one of {MODEL_NAMES:?})"),
                        ));
                    }
                } else if !TOP_KEYS.contains(&key.as_str()) {
                    return Err(ConfigError::new(&key, "unknown key"));
                }
                raw.top.insert(key, value);
            }
            Some(name) => {
                raw.sections.get_mut(name).unwrap().insert(key, value);
            }
        }
    }
    Ok(raw)
}

fn json_to_raw(value: &Value) -> Result<RawConfig, ConfigError> {
    let obj = value
        .as_object()
        .ok_or_else(|| ConfigError::new("config", "expected a JSON object"))?;
    let mut raw = RawConfig::default();
    let scalar = |key: &str, v: &Value| -> Result<String, ConfigError> {
        match v {
            Value::String(s) => Ok(s.clone()),
            Value::Number(n) => Ok(n.to_string()),
            Value::Bool(b) => Ok(b.to_string()),
            _ => Err(ConfigError::new(key, "expected a scalar value")),
        }
    };
    for (key, v) in obj {
        if let Value::Object(section) = v {
            if !MODEL_NAMES.contains(&key.as_str()) {
                return Err(ConfigError::new(key, "unknown section"));
            }
            let mut entries = BTreeMap::new();
            for (k, sv) in section {
                entries.insert(k.clone(), scalar(k, sv)?);
            }
            raw.sections.insert(key.clone(), entries);
        } else {
            if key != "model" && !TOP_KEYS.contains(&key.as_str()) {
                return Err(ConfigError::new(key, "unknown key"));
            }
            raw.top.insert(key.clone(), scalar(key, v)?);
        }
    }
    Ok(raw)
}

struct Resolver {
    raw: RawConfig,
}

impl Resolver {
    fn required(&self, key: &str) -> Result<&str, ConfigError> {
        self.raw
            .top
            .get(key)
            .map(|s| s.as_str())
            .ok_or_else(|| ConfigError::new(key, "missing required key"))
    }

    fn optional(&self, key: &str) -> Option<&str> {
        self.raw.top.get(key).map(|s| s.as_str())
    }

    fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, ConfigError> {
        value
            .parse::<T>()
            .map_err(|_| ConfigError::new(key, format!("cannot parse `{value}`")))
    }

    fn section(&self, name: &str) -> BTreeMap<String, String> {
        self.raw.sections.get(name).cloned().unwrap_or_default()
    }

    fn resolve(&self) -> Result<RunConfig, ConfigError> {
        let n_agents: usize = Self::parse("n_agents", self.required("n_agents")?)?;
        if n_agents < 2 {
            return Err(ConfigError::new("n_agents", "must be at least 2"));
        }
        let max_steps: u64 = Self::parse("max_steps", self.required("max_steps")?)?;
        if max_steps < 1 {
            return Err(ConfigError::new("max_steps", "must be at least 1"));
        }
        let total_money: f64 = match self.optional("total_money") {
            Some(v) => Self::parse("total_money", v)?,
            None => n_agents as f64,
        };
        if !(total_money.is_finite() && total_money > 0.0) {
            return Err(ConfigError::new("total_money", "must be positive"));
        }
        let seed: u64 = match self.optional("seed") {
            Some(v) => Self::parse("seed", v)?,
            None => 0,
        };
        let ensemble_size: usize = match self.optional("ensemble_size") {
            Some(v) => Self::parse("ensemble_size", v)?,
            None => 1,
        };
        if ensemble_size < 1 {
            return Err(ConfigError::new("ensemble_size", "must be at least 1"));
        }

        let schedule_name = self.optional("record_schedule").unwrap_or("geometric");
        let record = match schedule_name {
            "geometric" => {
                if self.optional("record_every").is_some() {
                    return Err(ConfigError::new(
                        "record_every",
                        "only valid with record_schedule = linear",
                    ));
                }
                let factor: f64 = match self.optional("record_factor") {
                    Some(v) => Self::parse("record_factor", v)?,
                    None => 1.1,
                };
                if !(factor.is_finite() && factor > 1.0) {
                    return Err(ConfigError::new("record_factor", "must exceed 1"));
                }
                RecordSchedule::Geometric { factor }
            }
            "linear" => {
                if self.optional("record_factor").is_some() {
                    return Err(ConfigError::new(
                        "record_factor",
                        "only valid with record_schedule = geometric",
                    ));
                }
                let every: u64 = Self::parse("record_every", self.required("record_every")?)?;
                if every < 1 {
                    return Err(ConfigError::new("record_every", "must be at least 1"));
                }
                RecordSchedule::Linear { every }
            }
            other => {
                return Err(ConfigError::new(
                    "record_schedule",
                    format!("unknown schedule `{other}` (expected geometric or linear)"),
                ))
            }
        };

        let saturation_window: usize = match self.optional("saturation_window") {
            Some(v) => Self::parse("saturation_window", v)?,
            None => 20,
        };
        if saturation_window < 2 {
            return Err(ConfigError::new("saturation_window", "must be at least 2"));
        }
        let saturation_tolerance: f64 = match self.optional("saturation_tolerance") {
            Some(v) => Self::parse("saturation_tolerance", v)?,
            None => 0.02,
        };
        if !(saturation_tolerance.is_finite() && saturation_tolerance > 0.0) {
            return Err(ConfigError::new("saturation_tolerance", "must be positive"));
        }

        let model_name = self.required("model")?.to_string();
        let model = self.resolve_model(&model_name, n_agents)?;

        Ok(RunConfig {
            sim: SimConfig {
                n_agents,
                total_money,
                model,
                max_steps,
                seed,
                ensemble_size,
                record,
            },
            saturation_window,
            saturation_tolerance,
        })
    }

    fn resolve_model(&self, name: &str, n_agents: usize) -> Result<ModelConfig, ConfigError> {
        let mut section = self.section(name);
        let model = match name {
            "pure_ys" => ModelConfig::PureYs,
            "pure_tf" => ModelConfig::PureTf,
            "mixed_agents" => {
                let list = section
                    .remove("tf_agents")
                    .ok_or_else(|| ConfigError::new("tf_agents", "missing required key"))?;
                let mut tf_agents = std::collections::BTreeSet::new();
                for part in list.split(',') {
                    let idx: usize = Self::parse("tf_agents", part.trim())?;
                    if idx >= n_agents {
                        return Err(ConfigError::new(
                            "tf_agents",
                            format!("agent index {idx} out of range for {n_agents} agents"),
                        ));
                    }
                    tf_agents.insert(idx);
                }
                ModelConfig::MixedAgents { tf_agents }
            }
            "split_wealth" => {
                let lambda = section
                    .remove("lambda")
                    .ok_or_else(|| ConfigError::new("lambda", "missing required key"))?;
                let lambdas = parse_param_spec("lambda", &lambda)?;
                let mode = match section.remove("split_mode").as_deref() {
                    None | Some("coupled") => SplitMode::Coupled,
                    Some("independent") => SplitMode::Independent,
                    Some(other) => {
                        return Err(ConfigError::new(
                            "split_mode",
                            format!("unknown mode `{other}` (expected coupled or independent)"),
                        ))
                    }
                };
                ModelConfig::SplitWealth { lambdas, mode }
            }
            "probabilistic_choice" => {
                let ps = match section.remove("p") {
                    Some(v) => parse_param_spec("p", &v)?,
                    None => ParamSpec::QuenchedUniform,
                };
                let disagreement = match section.remove("disagreement").as_deref() {
                    None | Some("fallback_ys") => DisagreementPolicy::FallbackYs,
                    Some("skip") => DisagreementPolicy::Skip,
                    Some(other) => {
                        return Err(ConfigError::new(
                            "disagreement",
                            format!("unknown policy `{other}` (expected fallback_ys or skip)"),
                        ))
                    }
                };
                ModelConfig::ProbabilisticChoice { ps, disagreement }
            }
            _ => return Err(ConfigError::new("model", format!("unknown model `{name}`"))),
        };
        if let Some(stray) = section.keys().next() {
            return Err(ConfigError::new(
                stray.clone(),
                format!("unknown key in [{name}]"),
            ));
        }
        Ok(model)
    }
}

fn parse_param_spec(key: &str, value: &str) -> Result<ParamSpec, ConfigError> {
    if value == "uniform" {
        return Ok(ParamSpec::QuenchedUniform);
    }
    let v: f64 = value
        .parse()
        .map_err(|_| ConfigError::new(key, format!("expected `uniform` or a number, got `{value}`")))?;
    if !(0.0..=1.0).contains(&v) {
        return Err(ConfigError::new(key, format!("{v} outside [0, 1]")));
    }
    Ok(ParamSpec::Homogeneous(v))
}

/// Parse the text config format.
pub fn parse_config_str(text: &str) -> Result<RunConfig, ConfigError> {
    Resolver {
        raw: parse_text(text)?,
    }
    .resolve()
}

/// Load a config from a file: the key-value text format, a config JSON
/// object, or a run manifest (whose embedded config is used).
pub fn load_config_source(path: &Path) -> Result<RunConfig, super::CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| super::io_usage(path, e))?;
    if text.trim_start().starts_with('{') {
        let value: Value = serde_json::from_str(&text)
            .map_err(|e| super::CliError::Usage(format!("{}: invalid JSON: {e}", path.display())))?;
        let config_value = value.get("config").unwrap_or(&value);
        let raw = json_to_raw(config_value)?;
        Ok(Resolver { raw }.resolve()?)
    } else {
        Ok(parse_config_str(&text)?)
    }
}

/// JSON mirror of a resolved config, with every default made explicit.
pub(crate) fn config_to_json(config: &RunConfig) -> Value {
    let sim = &config.sim;
    let mut obj = Map::new();
    obj.insert("n_agents".into(), json!(sim.n_agents));
    obj.insert("total_money".into(), json!(sim.total_money));
    obj.insert("max_steps".into(), json!(sim.max_steps));
    obj.insert("seed".into(), json!(sim.seed));
    obj.insert("ensemble_size".into(), json!(sim.ensemble_size));
    match sim.record {
        RecordSchedule::Geometric { factor } => {
            obj.insert("record_schedule".into(), json!("geometric"));
            obj.insert("record_factor".into(), json!(factor));
        }
        RecordSchedule::Linear { every } => {
            obj.insert("record_schedule".into(), json!("linear"));
            obj.insert("record_every".into(), json!(every));
        }
    }
    obj.insert("saturation_window".into(), json!(config.saturation_window));
    obj.insert(
        "saturation_tolerance".into(),
        json!(config.saturation_tolerance),
    );
    let param_value = |spec: &ParamSpec| -> Value {
        match spec {
            ParamSpec::Homogeneous(v) => json!(v),
            ParamSpec::QuenchedUniform => json!("uniform"),
            ParamSpec::Explicit(values) => json!(values),
        }
    };
    match &sim.model {
        ModelConfig::PureYs => {
            obj.insert("model".into(), json!("pure_ys"));
        }
        ModelConfig::PureTf => {
            obj.insert("model".into(), json!("pure_tf"));
        }
        ModelConfig::MixedAgents { tf_agents } => {
            obj.insert("model".into(), json!("mixed_agents"));
            let list = tf_agents
                .iter()
                .map(|a| a.to_string())
                .collect::<Vec<_>>()
                .join(",");
            obj.insert("mixed_agents".into(), json!({ "tf_agents": list }));
        }
        ModelConfig::SplitWealth { lambdas, mode } => {
            obj.insert("model".into(), json!("split_wealth"));
            let mode = match mode {
                SplitMode::Coupled => "coupled",
                SplitMode::Independent => "independent",
            };
            obj.insert(
                "split_wealth".into(),
                json!({ "lambda": param_value(lambdas), "split_mode": mode }),
            );
        }
        ModelConfig::ProbabilisticChoice { ps, disagreement } => {
            obj.insert("model".into(), json!("probabilistic_choice"));
            let policy = match disagreement {
                DisagreementPolicy::FallbackYs => "fallback_ys",
                DisagreementPolicy::Skip => "skip",
            };
            obj.insert(
                "probabilistic_choice".into(),
                json!({ "p": param_value(ps), "disagreement": policy }),
            );
        }
    }
    Value::Object(obj)
}
