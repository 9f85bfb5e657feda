//! Flat `key = value` scenario files.
//!
//! Blank lines and anything after `#` are ignored. Every key must name a
//! [`ScenarioConfig`] field; unset fields keep their defaults.

use std::fmt;
use std::path::Path;

use d2d_core::ScenarioConfig;

/// A scenario file or override that cannot be applied.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub key: String,
    pub reason: String,
    pub line: Option<usize>,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}: {}: {}", self.key, self.reason),
            None => write!(f, "{}: {}", self.key, self.reason),
        }
    }
}

impl std::error::Error for ConfigError {}

pub const KEYS: [&str; 13] = [
    "cell_radius_m",
    "num_cellular",
    "num_d2d",
    "d2d_max_dist_m",
    "bs_power_dbm",
    "d2d_power_dbm",
    "noise_dbm",
    "pathloss_exp",
    "pathloss_const_db",
    "shadowing_sigma_db",
    "fading_enabled",
    "min_dist_m",
    "seed",
];

fn parse_value<T: std::str::FromStr>(key: &str, value: &str, what: &str) -> Result<T, ConfigError> {
    value.parse().map_err(|_| ConfigError {
        key: key.to_string(),
        reason: format!("expected {what}, got `{value}`"),
        line: None,
    })
}

/// Sets one field by name.
pub fn apply(config: &mut ScenarioConfig, key: &str, value: &str) -> Result<(), ConfigError> {
    let real = |v| parse_value::<f64>(key, v, "a number");
    match key {
        "cell_radius_m" => config.cell_radius_m = real(value)?,
        "num_cellular" => config.num_cellular = parse_value(key, value, "a non-negative integer")?,
        "num_d2d" => config.num_d2d = parse_value(key, value, "a non-negative integer")?,
        "d2d_max_dist_m" => config.d2d_max_dist_m = real(value)?,
        "bs_power_dbm" => config.bs_power_dbm = real(value)?,
        "d2d_power_dbm" => config.d2d_power_dbm = real(value)?,
        "noise_dbm" => config.noise_dbm = real(value)?,
        "pathloss_exp" => config.pathloss_exp = real(value)?,
        "pathloss_const_db" => config.pathloss_const_db = real(value)?,
        "shadowing_sigma_db" => config.shadowing_sigma_db = real(value)?,
        "fading_enabled" => config.fading_enabled = parse_value(key, value, "true or false")?,
        "min_dist_m" => config.min_dist_m = real(value)?,
        "seed" => config.seed = parse_value(key, value, "a non-negative integer")?,
        _ => {
            return Err(ConfigError {
                key: key.to_string(),
                reason: "unknown key".into(),
                line: None,
            })
        }
    }
    Ok(())
}

/// Applies every assignment in `text` on top of `config`.
pub fn apply_str(config: &mut ScenarioConfig, text: &str) -> Result<(), ConfigError> {
    let mut seen: Vec<&str> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let at = |mut e: ConfigError| {
            e.line = Some(i + 1);
            e
        };
        let (key, value) = line.split_once('=').ok_or_else(|| {
            at(ConfigError {
                key: line.to_string(),
                reason: "expected `key = value`".into(),
                line: None,
            })
        })?;
        let (key, value) = (key.trim(), value.trim());
        if seen.contains(&key) {
            return Err(at(ConfigError {
                key: key.to_string(),
                reason: "set more than once".into(),
                line: None,
            }));
        }
        seen.push(key);
        apply(config, key, value).map_err(at)?;
    }
    Ok(())
}

/// Renders `config` in the file format, one key per line.
pub fn to_config_string(config: &ScenarioConfig) -> String {
    let c = config;
    let values: [String; 13] = [
        c.cell_radius_m.to_string(),
        c.num_cellular.to_string(),
        c.num_d2d.to_string(),
        c.d2d_max_dist_m.to_string(),
        c.bs_power_dbm.to_string(),
        c.d2d_power_dbm.to_string(),
        c.noise_dbm.to_string(),
        c.pathloss_exp.to_string(),
        c.pathloss_const_db.to_string(),
        c.shadowing_sigma_db.to_string(),
        c.fading_enabled.to_string(),
        c.min_dist_m.to_string(),
        c.seed.to_string(),
    ];
    KEYS.iter()
        .zip(values)
        .map(|(k, v)| format!("{k} = {v}\n"))
        .collect()
}

/// Resolves a scenario from an optional file plus flag overrides (applied in
/// order, after the file) and validates the result.
pub fn parse_config(
    path: Option<&Path>,
    overrides: &[(&str, String)],
) -> anyhow::Result<ScenarioConfig> {
    let mut config = ScenarioConfig::default();
    if let Some(path) = path {
        let text = std::fs::read_to_string(path).map_err(|e| {
            anyhow::Error::new(e).context(format!("cannot read config {}", path.display()))
        })?;
        apply_str(&mut config, &text)?;
    }
    for (key, value) in overrides {
        apply(&mut config, key, value)?;
    }
    config.validate()?;
    Ok(config)
}
