//! Key-value problem files.
//!
//! ```toml
//! c = 1.0
//! L = 1.0
//! T = 1.0
//! mu = 1
//! N = 80
//! M = 80
//! u0 = "sin_pi_x"          # registry name ...
//! v0 = "one"
//! p0 = "t_plus_half_t2"
//! pL = "t_plus_half_t2"
//! q0 = "data/flux.csv"     # ... or a CSV file with header `coordinate,value`
//! ```
//!
//! Optional keys: `K`, `control` (`"neumann"` or `"dirichlet"`) and `force`
//! (the exact force, used only for error reporting).

use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

use crate::benchmark;
use crate::model::{BoundaryKind, ControlKind, ModelError, ProblemSpec, Profile};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },

    #[error("malformed config: {0}")]
    Parse(#[from] toml::de::Error),

    #[error("mu must be 0 or 1, got {0}")]
    InvalidMu(u8),

    #[error("unknown control kind {0:?} (expected \"neumann\" or \"dirichlet\")")]
    InvalidControl(String),

    #[error("{key}: {value:?} is neither a registry function nor a readable CSV file")]
    UnknownFunction { key: String, value: String },

    #[error("{path}: {message}")]
    Csv { path: PathBuf, message: String },

    #[error(transparent)]
    Profile(#[from] ModelError),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    c: f64,
    #[serde(rename = "L")]
    length: f64,
    #[serde(rename = "T")]
    horizon: f64,
    mu: u8,
    #[serde(rename = "N")]
    n_time: Option<usize>,
    #[serde(rename = "M")]
    n_space: Option<usize>,
    #[serde(rename = "K")]
    modes: Option<usize>,
    control: Option<String>,
    u0: String,
    v0: String,
    p0: String,
    #[serde(rename = "pL")]
    p_l: String,
    q0: String,
    force: Option<String>,
}

/// A problem read from a config file plus the discretisation hints it carries.
#[derive(Debug, Clone)]
pub struct ProblemConfig {
    pub spec: ProblemSpec,
    pub n_time: Option<usize>,
    pub n_space: Option<usize>,
    pub modes: Option<usize>,
    pub control: Option<ControlKind>,
    pub exact_force: Option<Profile>,
}

pub fn load(path: &Path) -> Result<ProblemConfig, ConfigError> {
    let text = fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    parse(&text, base)
}

/// Parses config text; relative CSV paths are resolved against `base_dir`.
pub fn parse(text: &str, base_dir: &Path) -> Result<ProblemConfig, ConfigError> {
    let raw: RawConfig = toml::from_str(text)?;
    let boundary_kind = BoundaryKind::from_mu(raw.mu).ok_or(ConfigError::InvalidMu(raw.mu))?;
    let control = raw.control.as_deref().map(parse_control).transpose()?;
    let resolve = |key: &str, value: &str| resolve_function(key, value, base_dir);

    let spec = ProblemSpec {
        wave_speed: raw.c,
        length: raw.length,
        horizon: raw.horizon,
        boundary_kind,
        initial_displacement: resolve("u0", &raw.u0)?,
        initial_velocity: resolve("v0", &raw.v0)?,
        left_dirichlet: resolve("p0", &raw.p0)?,
        right_data: resolve("pL", &raw.p_l)?,
        measured_flux: resolve("q0", &raw.q0)?,
    };
    let exact_force = raw.force.as_deref().map(|f| resolve("force", f)).transpose()?;

    Ok(ProblemConfig {
        spec,
        n_time: raw.n_time,
        n_space: raw.n_space,
        modes: raw.modes,
        control,
        exact_force,
    })
}

pub fn parse_control(s: &str) -> Result<ControlKind, ConfigError> {
    match s.to_ascii_lowercase().as_str() {
        "neumann" => Ok(ControlKind::Neumann),
        "dirichlet" => Ok(ControlKind::Dirichlet),
        _ => Err(ConfigError::InvalidControl(s.to_string())),
    }
}

fn resolve_function(key: &str, value: &str, base_dir: &Path) -> Result<Profile, ConfigError> {
    if let Some(p) = benchmark::function(value) {
        return Ok(p);
    }
    let path = base_dir.join(value);
    if !path.is_file() {
        return Err(ConfigError::UnknownFunction {
            key: key.to_string(),
            value: value.to_string(),
        });
    }
    read_samples(&path)
}

/// Reads a two-column `coordinate,value` CSV into a tabulated profile.
pub fn read_samples(path: &Path) -> Result<Profile, ConfigError> {
    let csv_err = |message: String| ConfigError::Csv {
        path: path.to_path_buf(),
        message,
    };
    let mut reader = csv::Reader::from_path(path).map_err(|e| csv_err(e.to_string()))?;
    let headers = reader.headers().map_err(|e| csv_err(e.to_string()))?.clone();
    if headers.len() != 2 || &headers[0] != "coordinate" || &headers[1] != "value" {
        return Err(csv_err(format!(
            "expected header `coordinate,value`, found `{}`",
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut samples = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| csv_err(e.to_string()))?;
        let parse = |i: usize| {
            record[i]
                .trim()
                .parse::<f64>()
                .map_err(|e| csv_err(format!("row {}: {e}", line + 2)))
        };
        samples.push((parse(0)?, parse(1)?));
    }
    Ok(Profile::tabulated(samples)?)
}
