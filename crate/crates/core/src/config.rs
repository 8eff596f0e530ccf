//! Run configuration: a TOML file with one section per analysis, dotted-key
//! overrides, and environment overrides for the seed and thread budget.
//!
//! Precedence, lowest first: built-in defaults, config file, `--set`
//! overrides, `POLARITON_SEED` / `POLARITON_THREADS`, explicit `--seed` /
//! `--threads` flags. Unknown keys are rejected everywhere.

use crate::disorder::{CouplingAxis, NumberDistribution, SiteMethod};
use crate::meanfield::SolverOptions;
use crate::observables::LossParams;
use crate::params::{
    FrequencyConvention, ParamError, SystemParams, DEFAULT_G_GHZ, DEFAULT_REFRACTIVE_INDEX, DEFAULT_WAVELENGTH_NM,
};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use thiserror::Error;

pub const ENV_SEED: &str = "POLARITON_SEED";
pub const ENV_THREADS: &str = "POLARITON_THREADS";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("config parse error: {0}")]
    Parse(String),
    #[error("bad override `{0}`: expected key.path=value")]
    Override(String),
    #[error("environment variable {name}={value:?} is not a valid {what}")]
    Env { name: &'static str, value: String, what: &'static str },
    #[error("invalid config: {0}")]
    Invalid(String),
    #[error(transparent)]
    Param(#[from] ParamError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SystemSection {
    pub big_n: usize,
    pub z: usize,
    /// Δ = ω_ph − ω_ex in units of g.
    pub detuning_g: f64,
    pub g_ghz: f64,
    pub convention: FrequencyConvention,
    pub wavelength_nm: f64,
    pub refractive_index: f64,
}

impl Default for SystemSection {
    fn default() -> Self {
        Self {
            big_n: 8,
            z: 4,
            detuning_g: 0.0,
            g_ghz: DEFAULT_G_GHZ,
            convention: FrequencyConvention::Ordinary,
            wavelength_nm: DEFAULT_WAVELENGTH_NM,
            refractive_index: DEFAULT_REFRACTIVE_INDEX,
        }
    }
}

impl SystemSection {
    pub fn g(&self) -> f64 {
        self.convention.to_angular(self.g_ghz)
    }

    pub fn params(&self, big_n: usize, detuning_g: f64) -> Result<SystemParams, ParamError> {
        SystemParams::from_wavelength(self.wavelength_nm, self.g(), detuning_g, big_n, self.z)
    }

    pub fn base(&self) -> Result<SystemParams, ParamError> {
        self.params(self.big_n, self.detuning_g)
    }
}

/// Evenly spaced axis from `min` to `max` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl Axis {
    pub fn new(min: f64, max: f64, points: usize) -> Self {
        Self { min, max, points }
    }

    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.min];
        }
        let step = (self.max - self.min) / (self.points - 1) as f64;
        (0..self.points)
            .map(|i| if i + 1 == self.points { self.max } else { self.min + step * i as f64 })
            .collect()
    }

    fn validate(&self, name: &str) -> Result<(), ConfigError> {
        if self.points == 0 {
            return Err(ConfigError::Invalid(format!("{name}.points must be positive")));
        }
        if !(self.min.is_finite() && self.max.is_finite()) {
            return Err(ConfigError::Invalid(format!("{name} bounds must be finite")));
        }
        if self.points > 1 && self.max <= self.min {
            return Err(ConfigError::Invalid(format!("{name}.max must exceed {name}.min")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PhaseDiagramSection {
    /// Tunneling axis in units of g.
    pub t: Axis,
    /// μ − ω_ex axis in units of g.
    pub mu: Axis,
    pub heatmap: bool,
}

impl Default for PhaseDiagramSection {
    fn default() -> Self {
        Self {
            t: Axis::new(0.0, 0.02, 64),
            mu: Axis::new(-2.9, -2.2, 64),
            heatmap: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CriticalSection {
    pub big_n: Vec<usize>,
    pub detuning_g: Vec<f64>,
    pub lobe: usize,
}

impl Default for CriticalSection {
    fn default() -> Self {
        Self {
            big_n: vec![1, 3, 8, 20, 50],
            detuning_g: vec![0.0],
            lobe: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DisorderSection {
    pub n_mean: f64,
    pub detuning_g: f64,
    /// Photon-frequency spread axis in GHz (converted with the system convention).
    pub sigma_omega_ghz: Axis,
    /// Coupling-disorder axis in units of g; see `coupling_axis`.
    pub delta_g: Axis,
    /// Impurity-number spread axis in counts.
    pub n_sigma: Axis,
    pub coupling_axis: CouplingAxis,
    pub n_dist: NumberDistribution,
    pub method: SiteMethod,
    pub sample_count: usize,
    pub quantile: f64,
    pub eta: f64,
    pub lobe: usize,
}

impl Default for DisorderSection {
    fn default() -> Self {
        Self {
            n_mean: 3.0,
            detuning_g: 12.0,
            sigma_omega_ghz: Axis::new(0.0, 60.0, 16),
            delta_g: Axis::new(0.0, 0.28, 16),
            n_sigma: Axis::new(0.0, 1.2, 16),
            coupling_axis: CouplingAxis::StdDev,
            n_dist: NumberDistribution::SubPoisson,
            method: SiteMethod::Exact,
            sample_count: 10_000,
            quantile: 0.005,
            eta: 1.0,
            lobe: 1,
        }
    }
}

/// A material map given either as a field file or a uniform value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MapSource {
    Uniform(f64),
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KerrSection {
    /// Mode profile file (binary or text field format).
    pub phi: Option<PathBuf>,
    pub k_c: MapSource,
    pub chi3: MapSource,
    /// Neighbour displacement in meters.
    pub displacement_m: [f64; 3],
    /// Also evaluate on every second node for an error estimate.
    pub error_estimate: bool,
}

impl Default for KerrSection {
    fn default() -> Self {
        Self {
            phi: None,
            k_c: MapSource::Uniform(1.0),
            chi3: MapSource::Uniform(0.0),
            displacement_m: [0.0; 3],
            error_estimate: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunSection {
    pub output_dir: PathBuf,
    pub seed: u64,
    /// Worker threads; 0 picks the machine default.
    pub threads: usize,
    /// Report t and μ in GHz instead of units of g.
    pub physical_units: bool,
}

impl Default for RunSection {
    fn default() -> Self {
        Self {
            output_dir: PathBuf::from("out"),
            seed: 0,
            threads: 0,
            physical_units: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub system: SystemSection,
    pub loss: LossParams,
    pub solver: SolverOptions,
    pub phase_diagram: PhaseDiagramSection,
    pub critical: CriticalSection,
    pub disorder: DisorderSection,
    pub kerr: KerrSection,
    pub run: RunSection,
}

/// Splits `a.b.c=value` and parses the value as a TOML literal, falling back
/// to a bare string.
fn parse_override(s: &str) -> Result<(Vec<String>, toml::Value), ConfigError> {
    let (key, raw) = s.split_once('=').ok_or_else(|| ConfigError::Override(s.to_string()))?;
    let path: Vec<String> = key.trim().split('.').map(str::to_string).collect();
    if path.iter().any(String::is_empty) {
        return Err(ConfigError::Override(s.to_string()));
    }
    let raw = raw.trim();
    let value = toml::from_str::<toml::Table>(&format!("v = {raw}"))
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()));
    Ok((path, value))
}

fn apply_override(root: &mut toml::Table, path: &[String], value: toml::Value) -> Result<(), ConfigError> {
    let (last, parents) = path.split_last().expect("non-empty path");
    let mut table = root;
    for key in parents {
        let entry = table
            .entry(key.clone())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()));
        table = entry
            .as_table_mut()
            .ok_or_else(|| ConfigError::Override(format!("{} is not a section", path.join("."))))?;
    }
    match (table.get_mut(last), value) {
        (Some(toml::Value::Table(b)), toml::Value::Table(t)) => merge_tables(b, t),
        (_, v) => {
            table.insert(last.clone(), v);
        }
    }
    Ok(())
}

fn merge_tables(base: &mut toml::Table, top: toml::Table) {
    for (key, value) in top {
        match (base.get_mut(&key), value) {
            (Some(toml::Value::Table(b)), toml::Value::Table(t)) => merge_tables(b, t),
            (_, v) => {
                base.insert(key, v);
            }
        }
    }
}

fn env_parse<T: std::str::FromStr>(name: &'static str, what: &'static str) -> Result<Option<T>, ConfigError> {
    match std::env::var(name) {
        Ok(v) if v.trim().is_empty() => Ok(None),
        Ok(v) => v.trim().parse().map(Some).map_err(|_| ConfigError::Env { name, value: v, what }),
        Err(_) => Ok(None),
    }
}

impl RunConfig {
    /// Builds the configuration from an optional TOML text and overrides.
    pub fn from_parts(text: Option<&str>, overrides: &[String]) -> Result<Self, ConfigError> {
        // start from the defaults so partial tables (e.g. one axis field) merge
        let mut table = toml::Table::try_from(RunConfig::default()).map_err(|e| ConfigError::Parse(e.to_string()))?;
        if let Some(t) = text {
            let file: toml::Table = toml::from_str(t).map_err(|e| ConfigError::Parse(e.to_string()))?;
            merge_tables(&mut table, file);
        }
        for o in overrides {
            let (path, value) = parse_override(o)?;
            apply_override(&mut table, &path, value)?;
        }
        let cfg: RunConfig = toml::Value::Table(table)
            .try_into()
            .map_err(|e: toml::de::Error| ConfigError::Parse(e.to_string()))?;
        Ok(cfg)
    }

    pub fn load(path: Option<&Path>, overrides: &[String]) -> Result<Self, ConfigError> {
        let text = match path {
            Some(p) => Some(std::fs::read_to_string(p).map_err(|source| ConfigError::Read {
                path: p.to_path_buf(),
                source,
            })?),
            None => None,
        };
        Self::from_parts(text.as_deref(), overrides)
    }

    /// Applies `POLARITON_SEED` and `POLARITON_THREADS` when set.
    pub fn apply_env(&mut self) -> Result<(), ConfigError> {
        if let Some(seed) = env_parse::<u64>(ENV_SEED, "u64 seed")? {
            self.run.seed = seed;
        }
        if let Some(threads) = env_parse::<usize>(ENV_THREADS, "thread count")? {
            self.run.threads = threads;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let s = &self.system;
        s.params(s.big_n, s.detuning_g)?;
        if !(s.refractive_index.is_finite() && s.refractive_index > 0.0) {
            return Err(ConfigError::Invalid("system.refractive_index must be positive".into()));
        }
        self.loss.validate()?;
        self.phase_diagram.t.validate("phase_diagram.t")?;
        self.phase_diagram.mu.validate("phase_diagram.mu")?;
        if self.phase_diagram.t.min < 0.0 {
            return Err(ConfigError::Invalid("phase_diagram.t.min must be ≥ 0".into()));
        }
        let c = &self.critical;
        if c.big_n.is_empty() || c.detuning_g.is_empty() {
            return Err(ConfigError::Invalid("critical.big_n and critical.detuning_g must be non-empty".into()));
        }
        if c.big_n.contains(&0) || c.lobe == 0 || c.detuning_g.iter().any(|d| !d.is_finite()) {
            return Err(ConfigError::Invalid("critical: N ≥ 1, lobe ≥ 1 and finite detunings required".into()));
        }
        let d = &self.disorder;
        d.sigma_omega_ghz.validate("disorder.sigma_omega_ghz")?;
        d.delta_g.validate("disorder.delta_g")?;
        d.n_sigma.validate("disorder.n_sigma")?;
        if d.sigma_omega_ghz.min < 0.0 || d.delta_g.min < 0.0 || d.n_sigma.min < 0.0 {
            return Err(ConfigError::Invalid("disorder axes must start at a non-negative width".into()));
        }
        if d.coupling_axis.half_range(d.delta_g.max) > 1.0 {
            return Err(ConfigError::Invalid(format!(
                "disorder.delta_g.max = {} maps to a half-range above g",
                d.delta_g.max
            )));
        }
        if d.sample_count == 0 || d.lobe == 0 || !(d.eta > 0.0) || !(0.0..0.5).contains(&d.quantile) {
            return Err(ConfigError::Invalid(
                "disorder: sample_count, lobe and eta must be positive; quantile in [0, 0.5)".into(),
            ));
        }
        if !(d.n_mean >= 1.0) {
            return Err(ConfigError::Invalid("disorder.n_mean must be ≥ 1".into()));
        }
        Ok(())
    }

    /// Canonical TOML of the resolved configuration.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }
}
