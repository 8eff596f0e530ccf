//! Command-line front end. The binary only parses arguments and maps the
//! result of [`run`] to an exit code; everything else lives here so the
//! commands can be driven from tests and examples.
//!
//! Every command writes into the configured output directory:
//! `config.toml` (resolved configuration), command-specific CSV/JSON/PGM
//! files, and `timing.json` (wall time and thread count, the only file that
//! differs between otherwise identical runs).

use crate::config::{ConfigError, MapSource, RunConfig};
use crate::disorder::{iso_surface, DisorderError, DisorderSpec, IsoGrid, IsoSettings};
use crate::kerr::format::read_field;
use crate::kerr::{effective_bhm, effective_bhm_with_error, KerrError, MaterialMaps, ScalarField3D};
use crate::meanfield::{MeanField, MeanFieldError, Phase};
use crate::model::{manifold_energy, SiteOperator};
use crate::observables::{
    doping_density, interaction_energy, polariton_fractions, required_q, RequiredQ,
};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;
use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_VALIDATION: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "polariton", version, about = "Polariton lattice phase transitions: phase diagrams, critical parameters, disorder and Kerr-limit analysis")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Order parameter and phase on a (t, μ) grid.
    PhaseDiagram(CommonArgs),
    /// Critical tunneling, U, photon fraction and required Q over N and Δ.
    Critical(CommonArgs),
    /// Disorder scan and the surface where the transition survives.
    Disorder(CommonArgs),
    /// Bose-Hubbard t and U from field files.
    Kerr(CommonArgs),
    /// Built-in oracle checks.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Args, Default)]
pub struct CommonArgs {
    /// TOML configuration file.
    #[arg(short, long)]
    pub config: Option<PathBuf>,
    /// Override a config key, e.g. `--set system.big_n=3`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
    /// Output directory (overrides run.output_dir).
    #[arg(short, long)]
    pub out: Option<PathBuf>,
    /// Random seed (overrides config and POLARITON_SEED).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads (overrides config and POLARITON_THREADS).
    #[arg(long)]
    pub threads: Option<usize>,
    /// Report t and μ in GHz instead of units of g.
    #[arg(long)]
    pub physical_units: bool,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Multiply every tolerance by this factor.
    #[arg(long, default_value_t = 1.0)]
    pub tolerance_scale: f64,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("input error: {0}")]
    Input(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("I/O error on {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Input(_) | CliError::Io { .. } => EXIT_CONFIG,
            CliError::Numerical(_) => EXIT_NUMERICAL,
            CliError::Validation(_) => EXIT_VALIDATION,
        }
    }
}

impl From<DisorderError> for CliError {
    fn from(e: DisorderError) -> Self {
        match e {
            DisorderError::InvalidSpec(_) | DisorderError::Param(_) => CliError::Input(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<MeanFieldError> for CliError {
    fn from(e: MeanFieldError) -> Self {
        CliError::Numerical(e.to_string())
    }
}

impl From<KerrError> for CliError {
    fn from(e: KerrError) -> Self {
        match e {
            KerrError::ZeroNorm(_) => CliError::Numerical(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

/// Files written by a command, relative to the output directory.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub output_dir: PathBuf,
    pub files: Vec<String>,
    pub message: String,
}

/// Resolves the configuration for a command from files, overrides,
/// environment and flags.
pub fn resolve_config(args: &CommonArgs) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::load(args.config.as_deref(), &args.overrides)?;
    cfg.apply_env()?;
    if let Some(seed) = args.seed {
        cfg.run.seed = seed;
    }
    if let Some(threads) = args.threads {
        cfg.run.threads = threads;
    }
    if let Some(out) = &args.out {
        cfg.run.output_dir = out.clone();
    }
    if args.physical_units {
        cfg.run.physical_units = true;
    }
    cfg.validate()?;
    Ok(cfg)
}

pub fn run(cli: Cli) -> Result<RunSummary, CliError> {
    let (args, tolerance_scale) = match &cli.command {
        Command::PhaseDiagram(a) | Command::Critical(a) | Command::Disorder(a) | Command::Kerr(a) => (a.clone(), 1.0),
        Command::Validate(v) => (v.common.clone(), v.tolerance_scale),
    };
    let cfg = resolve_config(&args)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.run.threads)
        .build()
        .map_err(|e| CliError::Input(format!("cannot build thread pool: {e}")))?;
    let threads = pool.current_num_threads();
    let start = Instant::now();
    let mut out = Output::create(&cfg)?;
    let message = pool.install(|| match &cli.command {
        Command::PhaseDiagram(_) => cmd_phase_diagram(&cfg, &mut out),
        Command::Critical(_) => cmd_critical(&cfg, &mut out),
        Command::Disorder(_) => cmd_disorder(&cfg, &mut out),
        Command::Kerr(_) => cmd_kerr(&cfg, &mut out),
        Command::Validate(_) => cmd_validate(&cfg, &mut out, tolerance_scale),
    });
    let timing = json!({
        "wall_seconds": start.elapsed().as_secs_f64(),
        "threads": threads,
    });
    out.json("timing.json", &timing)?;
    let message = message?;
    Ok(RunSummary {
        output_dir: out.dir,
        files: out.files,
        message,
    })
}

/// Ordered, single-threaded writer for one output directory.
pub struct Output {
    dir: PathBuf,
    files: Vec<String>,
}

impl Output {
    fn create(cfg: &RunConfig) -> Result<Self, CliError> {
        let dir = cfg.run.output_dir.clone();
        fs::create_dir_all(&dir).map_err(|source| CliError::Io { path: dir.clone(), source })?;
        let mut out = Self { dir, files: Vec::new() };
        out.text("config.toml", &snapshot(cfg).to_toml())?;
        Ok(out)
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    fn bytes(&mut self, name: &str, data: &[u8]) -> Result<(), CliError> {
        let path = self.path(name);
        fs::write(&path, data).map_err(|source| CliError::Io { path, source })?;
        if !self.files.iter().any(|f| f == name) {
            self.files.push(name.to_string());
        }
        Ok(())
    }

    fn text(&mut self, name: &str, text: &str) -> Result<(), CliError> {
        self.bytes(name, text.as_bytes())
    }

    fn json(&mut self, name: &str, value: &impl Serialize) -> Result<(), CliError> {
        let mut s = serde_json::to_string_pretty(value).expect("serializable");
        s.push('\n');
        self.text(name, &s)
    }

    fn csv(&mut self, name: &str, header: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| CliError::Io {
            path: self.path(name),
            source: std::io::Error::other(e.to_string()),
        };
        w.write_record(header).map_err(io)?;
        for r in rows {
            w.write_record(r).map_err(io)?;
        }
        let data = w.into_inner().map_err(|e| CliError::Io {
            path: self.path(name),
            source: std::io::Error::other(e.to_string()),
        })?;
        self.bytes(name, &data)
    }
}

/// The configuration as recorded in outputs: the output directory and
/// thread count do not affect results and are left out so snapshots of
/// equivalent runs compare equal.
pub fn snapshot(cfg: &RunConfig) -> RunConfig {
    let mut c = cfg.clone();
    c.run.output_dir = PathBuf::from(".");
    c.run.threads = 0;
    c
}

fn metadata(cfg: &RunConfig, command: &str, results: serde_json::Value) -> serde_json::Value {
    json!({
        "command": command,
        "version": env!("CARGO_PKG_VERSION"),
        "config": snapshot(cfg),
        "results": results,
    })
}

/// Shortest round-trip decimal; `inf`/`-inf`/`nan` spelled out.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:?}")
    }
}

/// Binary PGM (P5). `rows` are written top to bottom.
pub fn encode_pgm(width: usize, height: usize, pixel: impl Fn(usize, usize) -> u8) -> Vec<u8> {
    let mut data = format!("P5\n{width} {height}\n255\n").into_bytes();
    for row in 0..height {
        for col in 0..width {
            data.push(pixel(col, row));
        }
    }
    data
}

pub fn cmd_phase_diagram(cfg: &RunConfig, out: &mut Output) -> Result<String, CliError> {
    let params = cfg.system.base().map_err(ConfigError::from)?;
    let solver = MeanField::with_options(params.model(), cfg.solver.clone());
    let t_axis = cfg.phase_diagram.t.values();
    let mu_axis = cfg.phase_diagram.mu.values();
    let grid = solver
        .phase_diagram(&t_axis, &mu_axis)
        .map_err(|e| CliError::Numerical(e.to_string()))?;

    let unit = if cfg.run.physical_units {
        cfg.system.convention.from_angular(params.g())
    } else {
        1.0
    };
    let rows: Vec<Vec<String>> = grid
        .cells
        .iter()
        .map(|c| {
            vec![
                fmt_f64(c.t * unit),
                fmt_f64(c.mu * unit),
                fmt_f64(c.psi_star),
                c.phase.to_string(),
                c.phase.filling().map(|n| n.to_string()).unwrap_or_default(),
            ]
        })
        .collect();
    out.csv("phase_diagram.csv", &["t", "mu", "psi", "phase", "filling"], &rows)?;

    let finite_max = grid
        .cells
        .iter()
        .map(|c| c.psi_star)
        .filter(|p| p.is_finite())
        .fold(0.0, f64::max);
    let unbounded = grid.cells.iter().filter(|c| c.psi_star.is_infinite()).count();
    if cfg.phase_diagram.heatmap {
        let (nt, nmu) = (t_axis.len(), mu_axis.len());
        let pgm = encode_pgm(nt, nmu, |col, row| {
            // μ increases upwards
            let psi = grid.cell(col, nmu - 1 - row).psi_star;
            if psi.is_infinite() || finite_max == 0.0 {
                if psi > 0.0 { 255 } else { 0 }
            } else {
                (psi / finite_max * 255.0).round().clamp(0.0, 255.0) as u8
            }
        });
        out.bytes("psi_heatmap.pgm", &pgm)?;
    }
    let fillings = grid.fillings();
    let results = json!({
        "model": params.model(),
        "units": if cfg.run.physical_units { "GHz" } else { "g" },
        "t_points": t_axis.len(),
        "mu_points": mu_axis.len(),
        "max_finite_psi": finite_max,
        "unbounded_cells": unbounded,
        "max_photon_cutoff": grid.max_cutoff(),
        "mott_fillings": fillings,
        "superfluid_cells": grid.cells.iter().filter(|c| c.phase == Phase::Superfluid).count(),
    });
    out.json("metadata.json", &metadata(cfg, "phase-diagram", results))?;
    Ok(format!(
        "{} cells, Mott fillings {:?}",
        grid.cells.len(),
        fillings
    ))
}

#[derive(Debug, Clone, Serialize)]
struct CriticalRow {
    big_n: usize,
    detuning_g: f64,
    t_c: f64,
    mu_tip: f64,
    u: f64,
    c_ph_sq: f64,
    ratio: f64,
    q_r_eta1: Option<RequiredQ>,
    q_r_eta10: Option<RequiredQ>,
    status: String,
}

fn critical_row(cfg: &RunConfig, big_n: usize, detuning_g: f64) -> CriticalRow {
    let mut row = CriticalRow {
        big_n,
        detuning_g,
        t_c: f64::NAN,
        mu_tip: f64::NAN,
        u: f64::NAN,
        c_ph_sq: f64::NAN,
        ratio: f64::NAN,
        q_r_eta1: None,
        q_r_eta10: None,
        status: "ok".into(),
    };
    let result = (|| -> Result<(), String> {
        let params = cfg.system.params(big_n, detuning_g).map_err(|e| e.to_string())?;
        let model = params.model();
        let solver = MeanField::with_options(model, cfg.solver.clone());
        let cp = solver.critical_tunneling(cfg.critical.lobe).map_err(|e| e.to_string())?;
        let lobe_u = if cfg.critical.lobe == 1 {
            interaction_energy(&model).map_err(|e| e.to_string())?
        } else {
            solver.mott_lobe_mu_range(cfg.critical.lobe).map_err(|e| e.to_string())?.width()
        };
        let c = polariton_fractions(&model);
        row.t_c = cp.t_c;
        row.mu_tip = cp.mu_tip;
        row.u = lobe_u;
        row.c_ph_sq = c.c_ph_sq;
        row.ratio = lobe_u / (c.c_ph_sq * cp.t_c);
        let t_phys = cp.t_c * params.g();
        row.q_r_eta1 = Some(required_q(&params, &cfg.loss.with_eta(1.0), t_phys));
        row.q_r_eta10 = Some(required_q(&params, &cfg.loss.with_eta(10.0), t_phys));
        Ok(())
    })();
    if let Err(e) = result {
        row.status = format!("error: {e}");
    }
    row
}

fn fmt_q(q: &Option<RequiredQ>) -> String {
    match q {
        Some(RequiredQ::Reachable(v)) => fmt_f64(*v),
        Some(RequiredQ::Unreachable) => "unreachable".into(),
        None => String::new(),
    }
}

pub fn cmd_critical(cfg: &RunConfig, out: &mut Output) -> Result<String, CliError> {
    use rayon::prelude::*;
    let jobs: Vec<(usize, f64)> = cfg
        .critical
        .detuning_g
        .iter()
        .flat_map(|&d| cfg.critical.big_n.iter().map(move |&n| (n, d)))
        .collect();
    let rows: Vec<CriticalRow> = jobs.par_iter().map(|&(n, d)| critical_row(cfg, n, d)).collect();
    let unit = if cfg.run.physical_units {
        cfg.system.convention.from_angular(cfg.system.g())
    } else {
        1.0
    };
    let records: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.big_n.to_string(),
                fmt_f64(r.detuning_g),
                fmt_f64(r.t_c * unit),
                fmt_f64(r.mu_tip * unit),
                fmt_f64(r.u * unit),
                fmt_f64(r.c_ph_sq),
                fmt_f64(r.ratio),
                fmt_q(&r.q_r_eta1),
                fmt_q(&r.q_r_eta10),
                r.status.clone(),
            ]
        })
        .collect();
    out.csv(
        "critical.csv",
        &["N", "detuning", "t_c", "mu_tip", "U", "c_ph_sq", "ratio", "q_r_eta1", "q_r_eta10", "status"],
        &records,
    )?;
    let failures = rows.iter().filter(|r| r.status != "ok").count();
    out.json(
        "metadata.json",
        &metadata(
            cfg,
            "critical",
            json!({
                "units": if cfg.run.physical_units { "GHz" } else { "g" },
                "rows": rows.len(),
                "failed_rows": failures,
            }),
        ),
    )?;
    if failures == rows.len() {
        return Err(CliError::Numerical("every row failed; see critical.csv".into()));
    }
    Ok(format!("{} rows, {failures} failed", rows.len()))
}

pub fn cmd_disorder(cfg: &RunConfig, out: &mut Output) -> Result<String, CliError> {
    let d = &cfg.disorder;
    let big_n = d.n_mean.round() as usize;
    let base = cfg.system.params(big_n, d.detuning_g).map_err(ConfigError::from)?;
    let conv = cfg.system.convention;
    let grid = IsoGrid {
        sigma_omega: d.sigma_omega_ghz.values().into_iter().map(|x| conv.to_angular(x)).collect(),
        delta_g: d.delta_g.values(),
        n_sigma: d.n_sigma.values(),
    };
    let settings = IsoSettings {
        lobe: d.lobe,
        eta: d.eta,
        coupling_axis: d.coupling_axis,
        loss: cfg.loss,
        spec: DisorderSpec {
            n_dist: d.n_dist,
            sample_count: d.sample_count,
            seed: cfg.run.seed,
            quantile: d.quantile,
            method: d.method,
            ..DisorderSpec::clean(d.n_mean)
        },
    };
    let iso = iso_surface(&base, &grid, &settings)?;

    let rows: Vec<Vec<String>> = iso
        .points
        .iter()
        .map(|p| {
            vec![
                fmt_f64(conv.from_angular(p.sigma_omega)),
                fmt_f64(p.delta_g_axis),
                fmt_f64(p.delta_g),
                fmt_f64(p.n_sigma),
                fmt_f64(p.stats.delta_e),
                fmt_f64(p.stats.delta_u),
                fmt_f64(p.stats.u_mean),
                fmt_f64(p.stats.e_std),
                fmt_f64(p.stats.u_std),
                fmt_f64(p.stats.empty_fraction),
                fmt_f64(p.t_c_disordered),
                fmt_f64(p.marker),
            ]
        })
        .collect();
    out.csv(
        "disorder_grid.csv",
        &[
            "sigma_omega_ghz",
            "delta_g_axis",
            "delta_g_half_range",
            "n_sigma",
            "delta_e",
            "delta_u",
            "u_mean",
            "e_std",
            "u_std",
            "empty_fraction",
            "t_c_dis",
            "marker",
        ],
        &rows,
    )?;
    let boundary: Vec<Vec<String>> = iso
        .boundary
        .iter()
        .map(|b| vec![fmt_f64(conv.from_angular(b[0])), fmt_f64(b[1]), fmt_f64(b[2])])
        .collect();
    out.csv("disorder_boundary.csv", &["sigma_omega_ghz", "delta_g_axis", "n_sigma"], &boundary)?;

    let mut intercepts = serde_json::Map::new();
    for (axis, ic) in iso.intercepts.iter().enumerate() {
        let scale = |x: Option<f64>| {
            x.map(|v| match axis {
                0 => conv.from_angular(v),
                _ => v,
            })
        };
        let mut entry = json!({
            "last_nonnegative": scale(ic.last_nonnegative),
            "crossing": scale(ic.crossing),
            "beyond_range": ic.beyond_range,
        });
        if axis == 2 {
            entry["crossing_fraction_of_mean"] = json!(ic.crossing.map(|v| v / d.n_mean));
        }
        intercepts.insert(ic.axis.clone(), entry);
    }
    let summary = json!({
        "units": {
            "sigma_omega": "GHz",
            "delta_g": format!("g ({:?})", d.coupling_axis),
            "n_sigma": "impurities",
            "energies": "rad/s",
        },
        "clean_lobe": iso.clean,
        "loss_rate": iso.loss_rate,
        "eta": iso.eta,
        "grid": iso.dims,
        "boundary_points": iso.boundary.len(),
        "intercepts": intercepts,
    });
    out.json("disorder_summary.json", &metadata(cfg, "disorder", summary))?;
    let show = |v: Option<f64>| v.map(|x| format!("{x:.4}")).unwrap_or_else(|| "n/a".into());
    Ok(format!(
        "intercepts: sigma_omega {} GHz, delta_g {} g, n_sigma {} ({} of <N>)",
        show(iso.intercepts[0].crossing.map(|v| conv.from_angular(v))),
        show(iso.intercepts[1].crossing),
        show(iso.intercepts[2].crossing),
        show(iso.intercepts[2].crossing.map(|v| v / d.n_mean)),
    ))
}

fn load_map(src: &MapSource, like: &ScalarField3D) -> Result<ScalarField3D, CliError> {
    match src {
        MapSource::Uniform(v) => Ok(like.constant_like(*v)?),
        MapSource::File(p) => read_field(p).map_err(|e| CliError::Input(format!("{}: {e}", p.display()))),
    }
}

pub fn cmd_kerr(cfg: &RunConfig, out: &mut Output) -> Result<String, CliError> {
    let k = &cfg.kerr;
    let phi_path = k
        .phi
        .as_ref()
        .ok_or_else(|| CliError::Config(ConfigError::Invalid("kerr.phi (mode field file) is required".into())))?;
    let phi = read_field(phi_path).map_err(|e| CliError::Input(format!("{}: {e}", phi_path.display())))?;
    let maps = MaterialMaps::new(load_map(&k.k_c, &phi)?, load_map(&k.chi3, &phi)?)?;
    let results = if k.error_estimate {
        let est = effective_bhm_with_error(&maps, &phi, k.displacement_m)?;
        json!({
            "t": est.fine.t,
            "u": est.fine.u,
            "normalization": est.fine.normalization,
            "outside_support": est.fine.outside_support,
            "t_error_estimate": est.t_error,
            "u_error_estimate": est.u_error,
            "coarse": est.coarse,
            "grid": phi.dims(),
        })
    } else {
        let r = effective_bhm(&maps, &phi, k.displacement_m)?;
        json!({
            "t": r.t,
            "u": r.u,
            "normalization": r.normalization,
            "outside_support": r.outside_support,
            "grid": phi.dims(),
        })
    };
    let msg = format!("t = {}, U = {}", results["t"], results["u"]);
    out.json("kerr.json", &metadata(cfg, "kerr", results))?;
    Ok(msg)
}

/// One oracle comparison.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub expected: f64,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    fn relative(name: impl Into<String>, value: f64, expected: f64, tol: f64, scale: f64) -> Self {
        let residual = ((value - expected) / expected).abs();
        Self::finish(name, value, expected, residual, tol * scale)
    }

    fn absolute(name: impl Into<String>, value: f64, expected: f64, tol: f64, scale: f64) -> Self {
        Self::finish(name, value, expected, (value - expected).abs(), tol * scale)
    }

    fn finish(name: impl Into<String>, value: f64, expected: f64, residual: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            value,
            expected,
            residual,
            tolerance,
            pass: residual <= tolerance,
        }
    }
}

/// Runs the built-in oracle suite with every tolerance multiplied by `scale`.
pub fn validation_checks(scale: f64) -> Result<Vec<Check>, CliError> {
    use crate::meanfield::{bhm_boundary_oracle, bhm_lobe_tip, curvature_boundary};
    use crate::params::ModelParams;
    let mut checks = Vec::new();
    let num = |e: crate::eigen::EigenError| CliError::Numerical(e.to_string());

    // interaction energy against the two-level closed form
    let mut worst = (0.0f64, 1usize);
    for n in 1..=50usize {
        let model = ModelParams::new(n, 4, 0.0).map_err(|e| CliError::Input(e.to_string()))?;
        let u = interaction_energy(&model).map_err(num)?;
        let nf = n as f64;
        let exact = 2.0 * nf.sqrt() - (4.0 * nf - 2.0).sqrt();
        let r = ((u - exact) / exact).abs();
        if r >= worst.0 {
            worst = (r, n);
        }
    }
    checks.push(Check::finish(
        format!("U(N, 0) closed form, N = 1..50 (worst N = {})", worst.1),
        worst.0,
        0.0,
        worst.0,
        1e-9 * scale,
    ));

    let m8 = ModelParams::new(8, 4, 0.0).expect("valid");
    let u8 = interaction_energy(&m8).map_err(num)?;
    checks.push(Check::absolute("U(8, 0) vs 0.17962 g", u8, 0.17962, 1e-5, scale));

    let solver = MeanField::new(m8);
    let lobe = solver.mott_lobe_mu_range(1)?;
    checks.push(Check::absolute("lobe 1 lower edge, N = 8", lobe.lower, -2.82843, 1e-5, scale));
    checks.push(Check::absolute("lobe 1 upper edge, N = 8", lobe.upper, -2.64880, 1e-5, scale));
    checks.push(Check::relative("lobe 1 width equals U, N = 8", lobe.width(), u8, 1e-9, scale));

    // zero-hopping site operator against the manifold blocks
    let mu = -2.7;
    let op = SiteOperator::new(&m8, 12, mu).map_err(|e| CliError::Numerical(e.to_string()))?;
    let e_site = op.ground_energy(0.0, 0.0).map_err(|e| CliError::Numerical(e.to_string()))?;
    let mut e_block = f64::INFINITY;
    for n in 0..=12 {
        e_block = e_block.min(manifold_energy(&m8, n).map_err(num)? - n as f64 * mu);
    }
    checks.push(Check::absolute("site operator vs manifold blocks at t = 0", e_site, e_block, 1e-10, scale));

    // variational boundary against the Landau-curvature boundary
    for (n_imp, det, frac) in [(3usize, 0.0, 0.3), (8, 0.0, 0.5), (8, 2.0, 0.7)] {
        let model = ModelParams::new(n_imp, 4, det).expect("valid");
        let mf = MeanField::new(model);
        let range = mf.mott_lobe_mu_range(1)?;
        let mu = range.lower + frac * range.width();
        let t_var = mf.boundary_tunneling(1, mu)?;
        let t_curv = curvature_boundary(&model, 1, mu)?;
        checks.push(Check::relative(
            format!("boundary vs curvature oracle (N = {n_imp}, Δ = {det} g, μ = {mu:.5})"),
            t_var,
            t_curv,
            1e-3,
            scale,
        ));
    }

    // Bose-Hubbard tip: closed form against a dense scan of the boundary
    let (mu_tip, t_tip) = bhm_lobe_tip(1.0, 4, 1);
    let mut best = 0.0f64;
    for k in 1..20_000 {
        let mu = k as f64 / 20_000.0;
        best = best.max(bhm_boundary_oracle(1.0, 4, 1, mu)?);
    }
    checks.push(Check::relative(format!("Bose-Hubbard lobe tip (μ = {mu_tip:.5})"), best, t_tip, 1e-6, scale));

    let density = doping_density(8.0, 817.0, 3.6);
    checks.push(Check::relative("doping density N = 8 vs 6.8e14 cm^-3", density, 6.8e14, 1e-2, scale));
    Ok(checks)
}

pub fn cmd_validate(cfg: &RunConfig, out: &mut Output, tolerance_scale: f64) -> Result<String, CliError> {
    if !(tolerance_scale.is_finite() && tolerance_scale >= 0.0) {
        return Err(CliError::Input(format!("tolerance scale must be ≥ 0 (got {tolerance_scale})")));
    }
    let checks = validation_checks(tolerance_scale)?;
    let stdout = std::io::stdout();
    let mut w = stdout.lock();
    for c in &checks {
        let _ = writeln!(
            w,
            "{} {:<60} residual {:.3e} (tol {:.1e})",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            c.residual,
            c.tolerance
        );
    }
    let failed: Vec<&Check> = checks.iter().filter(|c| !c.pass).collect();
    out.json(
        "validate.json",
        &metadata(cfg, "validate", json!({ "tolerance_scale": tolerance_scale, "checks": checks })),
    )?;
    if !failed.is_empty() {
        return Err(CliError::Validation(format!(
            "{} of {} checks failed: {}",
            failed.len(),
            checks.len(),
            failed.iter().map(|c| c.name.as_str()).collect::<Vec<_>>().join("; ")
        )));
    }
    Ok(format!("all {} checks passed", checks.len()))
}

/// Entry point for the binary: parses `args`, runs, and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match run(cli) {
        Ok(s) => {
            println!("{}", s.message);
            println!("wrote {} file(s) to {}", s.files.len(), s.output_dir.display());
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
