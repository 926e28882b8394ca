//! Flat `key = value` configuration files.
//!
//! Lists are comma separated, `#` starts a comment, and every key is
//! optional. Unknown and repeated keys are rejected.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use lattice_riesz::SweepConfig;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: key `{key}` given twice")]
    DuplicateKey { line: usize, key: String },
    #[error("line {line}: bad value `{value}` for `{key}`")]
    BadValue {
        line: usize,
        key: String,
        value: String,
    },
    #[error("invalid configuration: {0}")]
    Invalid(#[from] lattice_riesz::Error),
}

/// Keys with their defaults, in the order [`render_config`] writes them.
pub const KEYS: [(&str, &str); 9] = [
    ("dimensions", "lattice dimensions n"),
    (
        "p_grid",
        "exponents p; p <= 1 feeds the atom sweeps, p > 1 the norm sweeps",
    ),
    ("alpha_grid", "ratios alpha/n in (0, 1)"),
    ("m_grid", "cube radii m"),
    ("trials", "random signals or atoms per grid point"),
    ("seed", "root seed; row seeds are root XOR row index"),
    (
        "box_radius",
        "evaluation box radius, or auto for 4 (4 floor(sqrt n) max(m) + 1)",
    ),
    ("t_resolution", "Poisson t-grid points per octave"),
    ("negative_controls", "on or off"),
];

fn parse_list<T: FromStr>(value: &str) -> Option<Vec<T>> {
    if value.trim().is_empty() {
        return Some(Vec::new());
    }
    value.split(',').map(|s| s.trim().parse().ok()).collect()
}

fn parse_switch(value: &str) -> Option<bool> {
    match value {
        "on" | "true" | "yes" => Some(true),
        "off" | "false" | "no" => Some(false),
        _ => None,
    }
}

/// `on`/`off` switch as used by `--negative-controls`.
pub fn parse_on_off(value: &str) -> Result<bool, String> {
    parse_switch(value).ok_or_else(|| format!("expected on or off, got `{value}`"))
}

/// Parses config text, starting from [`SweepConfig::default`].
pub fn parse_config(text: &str) -> Result<SweepConfig, ConfigError> {
    let mut config = SweepConfig::default();
    let mut seen = HashSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or(ConfigError::Syntax { line })?;
        let (key, value) = (key.trim(), value.trim());
        if !KEYS.iter().any(|(k, _)| *k == key) {
            return Err(ConfigError::UnknownKey {
                line,
                key: key.to_string(),
            });
        }
        if !seen.insert(key.to_string()) {
            return Err(ConfigError::DuplicateKey {
                line,
                key: key.to_string(),
            });
        }
        let bad = || ConfigError::BadValue {
            line,
            key: key.to_string(),
            value: value.to_string(),
        };
        match key {
            "dimensions" => config.dimensions = parse_list(value).ok_or_else(bad)?,
            "p_grid" => config.p_grid = parse_list(value).ok_or_else(bad)?,
            "alpha_grid" => config.alpha_grid = parse_list(value).ok_or_else(bad)?,
            "m_grid" => config.m_grid = parse_list(value).ok_or_else(bad)?,
            "trials" => config.trials = value.parse().map_err(|_| bad())?,
            "seed" => config.seed = value.parse().map_err(|_| bad())?,
            "box_radius" => {
                config.box_radius = if value == "auto" {
                    None
                } else {
                    Some(value.parse().map_err(|_| bad())?)
                }
            }
            "t_resolution" => config.t_resolution = value.parse().map_err(|_| bad())?,
            "negative_controls" => {
                config.negative_controls = parse_switch(value).ok_or_else(bad)?
            }
            _ => unreachable!("key checked above"),
        }
    }
    config.validate()?;
    Ok(config)
}

pub fn load_config(path: &Path) -> Result<SweepConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config(&text)
}

fn join<T: ToString>(values: &[T]) -> String {
    values
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

/// Config text that parses back to `config`, with one comment per key.
pub fn render_config(config: &SweepConfig) -> String {
    let values = [
        join(&config.dimensions),
        join(&config.p_grid),
        join(&config.alpha_grid),
        join(&config.m_grid),
        config.trials.to_string(),
        config.seed.to_string(),
        config
            .box_radius
            .map_or_else(|| "auto".to_string(), |r| r.to_string()),
        config.t_resolution.to_string(),
        if config.negative_controls {
            "on"
        } else {
            "off"
        }
        .to_string(),
    ];
    let mut out = String::new();
    for ((key, doc), value) in KEYS.iter().zip(values) {
        let _ = writeln!(out, "# {doc}");
        let _ = writeln!(out, "{key} = {value}");
    }
    out
}
