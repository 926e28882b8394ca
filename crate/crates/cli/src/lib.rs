//! Library side of `riesz-verify`: config parsing, report writing and the
//! `run` command. The binary only parses arguments.

pub mod config;
pub mod report;

use std::fs;
use std::path::{Path, PathBuf};

use chrono::{SecondsFormat, Utc};
use lattice_riesz::verify::{all_pass, run_suite, ExperimentRow, Suite, Verdict};
use lattice_riesz::SweepConfig;
use serde::Serialize;
use thiserror::Error;

pub use config::{load_config, parse_config, render_config, ConfigError};
pub use report::{emit_report, parse_csv, rows_to_csv, ReportError};

/// Every verdict passed (recorded rows count as passing).
pub const EXIT_PASS: u8 = 0;
/// At least one row failed.
pub const EXIT_FAIL: u8 = 1;
/// The configuration was missing or invalid; nothing was written.
pub const EXIT_CONFIG: u8 = 2;
/// A sweep or the output stage failed after the configuration was accepted.
pub const EXIT_RUNTIME: u8 = 3;

pub const MANIFEST_NAME: &str = "manifest.json";

/// Command-line overrides applied on top of the config file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub trials: Option<u32>,
    pub box_radius: Option<u64>,
    pub negative_controls: Option<bool>,
}

impl Overrides {
    pub fn apply(&self, config: &mut SweepConfig) {
        if let Some(seed) = self.seed {
            config.seed = seed;
        }
        if let Some(trials) = self.trials {
            config.trials = trials;
        }
        if let Some(r) = self.box_radius {
            config.box_radius = Some(r);
        }
        if let Some(on) = self.negative_controls {
            config.negative_controls = on;
        }
    }
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("sweep failed: {0}")]
    Sweep(lattice_riesz::Error),
    #[error(transparent)]
    Report(#[from] ReportError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("manifest: {0}")]
    Json(#[from] serde_json::Error),
}

impl RunError {
    pub fn exit_code(&self) -> u8 {
        match self {
            RunError::Config(_) => EXIT_CONFIG,
            _ => EXIT_RUNTIME,
        }
    }
}

/// Echo of the configuration in the manifest.
#[derive(Clone, Debug, Serialize)]
pub struct ConfigEcho {
    pub dimensions: Vec<usize>,
    pub p_grid: Vec<f64>,
    pub alpha_grid: Vec<f64>,
    pub m_grid: Vec<u64>,
    pub trials: u32,
    pub seed: u64,
    pub box_radius: Option<u64>,
    pub t_resolution: u32,
    pub negative_controls: bool,
}

impl From<&SweepConfig> for ConfigEcho {
    fn from(c: &SweepConfig) -> Self {
        Self {
            dimensions: c.dimensions.clone(),
            p_grid: c.p_grid.clone(),
            alpha_grid: c.alpha_grid.clone(),
            m_grid: c.m_grid.clone(),
            trials: c.trials,
            seed: c.seed,
            box_radius: c.box_radius,
            t_resolution: c.t_resolution,
            negative_controls: c.negative_controls,
        }
    }
}

/// Written last; its presence marks a complete run.
#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub suite: String,
    pub config: ConfigEcho,
    pub started: String,
    pub finished: String,
    pub rows: usize,
    pub failed: usize,
    pub exit_status: u8,
    /// Output files relative to the output directory.
    pub outputs: Vec<String>,
}

/// What a completed run produced.
#[derive(Debug)]
pub struct RunOutcome {
    pub rows: Vec<ExperimentRow>,
    pub outputs: Vec<PathBuf>,
    pub manifest: PathBuf,
    pub exit_code: u8,
}

fn now() -> String {
    Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true)
}

/// Loads the config (defaults when `config_path` is `None`), applies the
/// overrides and validates. Nothing is written.
pub fn resolve_config(
    config_path: Option<&Path>,
    overrides: &Overrides,
) -> Result<SweepConfig, ConfigError> {
    let mut config = match config_path {
        Some(path) => load_config(path)?,
        None => SweepConfig::default(),
    };
    overrides.apply(&mut config);
    config.validate()?;
    Ok(config)
}

/// Runs `suite` and writes `rows.csv`, one SVG per experiment and the
/// manifest into `out_dir`.
pub fn run(
    suite: Suite,
    config_path: Option<&Path>,
    out_dir: &Path,
    overrides: &Overrides,
) -> Result<RunOutcome, RunError> {
    let config = resolve_config(config_path, overrides)?;
    let started = now();
    let rows = run_suite(suite, &config).map_err(RunError::Sweep)?;
    let failed = rows.iter().filter(|r| r.verdict == Verdict::Fail).count();
    let exit_code = if all_pass(&rows) {
        EXIT_PASS
    } else {
        EXIT_FAIL
    };
    let outputs = if rows.is_empty() {
        fs::create_dir_all(out_dir).map_err(|source| RunError::Io {
            path: out_dir.to_path_buf(),
            source,
        })?;
        Vec::new()
    } else {
        emit_report(&rows, out_dir)?
    };
    let manifest = RunManifest {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        suite: suite.to_string(),
        config: ConfigEcho::from(&config),
        started,
        finished: now(),
        rows: rows.len(),
        failed,
        exit_status: exit_code,
        outputs: outputs
            .iter()
            .filter_map(|p| p.file_name())
            .map(|s| s.to_string_lossy().into_owned())
            .collect(),
    };
    let path = out_dir.join(MANIFEST_NAME);
    let tmp = report::partial_path(&path);
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| RunError::Io { path, source }
    };
    fs::write(&tmp, serde_json::to_string_pretty(&manifest)? + "\n").map_err(io(&tmp))?;
    fs::rename(&tmp, &path).map_err(io(&path))?;
    Ok(RunOutcome {
        rows,
        outputs,
        manifest: path,
        exit_code,
    })
}
