//! Scan of the three disorder widths for the surface where the disordered
//! lobe's tunneling still beats the polariton loss.

use super::{bg_mi_tunneling, disorder_stats, CleanLobe, DisorderError, DisorderSpec, DisorderStats};
use crate::meanfield::grid::check_axis;
use crate::meanfield::MeanField;
use crate::observables::{polariton_loss_rate, LossParams};
use crate::params::SystemParams;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Meaning of the coupling-disorder axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum CouplingAxis {
    /// Axis value is the half-range of the uniform coupling law.
    HalfRange,
    /// Axis value is the standard deviation of g_k; the half-range is √12 times it.
    #[default]
    StdDev,
}

impl CouplingAxis {
    pub fn half_range(self, value: f64) -> f64 {
        match self {
            CouplingAxis::HalfRange => value,
            CouplingAxis::StdDev => 12f64.sqrt() * value,
        }
    }
}

/// Axes of the scan. `sigma_omega` in rad/s, `delta_g` in units of g (see
/// [`CouplingAxis`]), `n_sigma` in counts. All must be ascending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsoGrid {
    pub sigma_omega: Vec<f64>,
    pub delta_g: Vec<f64>,
    pub n_sigma: Vec<f64>,
}

impl IsoGrid {
    pub fn len(&self) -> usize {
        self.sigma_omega.len() * self.delta_g.len() * self.n_sigma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dims(&self) -> [usize; 3] {
        [self.sigma_omega.len(), self.delta_g.len(), self.n_sigma.len()]
    }

    fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.delta_g.len() + j) * self.n_sigma.len() + k
    }

    fn axis(&self, a: usize) -> &[f64] {
        match a {
            0 => &self.sigma_omega,
            1 => &self.delta_g,
            _ => &self.n_sigma,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IsoSettings {
    /// Mott lobe whose survival is tracked.
    pub lobe: usize,
    /// Required ratio of disordered tunneling to loss.
    pub eta: f64,
    pub coupling_axis: CouplingAxis,
    pub loss: LossParams,
    /// Template for every grid point; its widths are overwritten by the axes.
    pub spec: DisorderSpec,
}

impl IsoSettings {
    pub fn new(n_mean: f64) -> Self {
        Self {
            lobe: 1,
            eta: 1.0,
            coupling_axis: CouplingAxis::StdDev,
            loss: LossParams::default(),
            spec: DisorderSpec::clean(n_mean),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IsoPoint {
    pub index: [usize; 3],
    pub sigma_omega: f64,
    /// Axis value as given.
    pub delta_g_axis: f64,
    /// Uniform half-range actually sampled.
    pub delta_g: f64,
    pub n_sigma: f64,
    pub stats: DisorderStats,
    pub t_c_disordered: f64,
    /// |c_ph|² t_c,dis − η Γ (rad/s); the transition is observable where ≥ 0.
    pub marker: f64,
}

/// Where the marker turns negative along one axis with the other two widths
/// at their first grid value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxisIntercept {
    pub axis: String,
    /// Largest axis value with f ≥ 0 before the first sign change.
    pub last_nonnegative: Option<f64>,
    /// Linear interpolation of the f = 0 crossing.
    pub crossing: Option<f64>,
    /// f stays ≥ 0 over the whole axis.
    pub beyond_range: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IsoSurface {
    pub clean: CleanLobe,
    /// Polariton loss rate Γ (1/s).
    pub loss_rate: f64,
    pub eta: f64,
    pub dims: [usize; 3],
    pub points: Vec<IsoPoint>,
    /// f = 0 crossings on grid edges, as (sigma_omega, delta_g axis, n_sigma).
    pub boundary: Vec<[f64; 3]>,
    pub intercepts: Vec<AxisIntercept>,
}

const AXIS_NAMES: [&str; 3] = ["sigma_omega", "delta_g", "n_sigma"];

fn crossing(x0: f64, f0: f64, x1: f64, f1: f64) -> f64 {
    x0 + (x1 - x0) * f0 / (f0 - f1)
}

/// Evaluates the marker on every grid point and extracts the f = 0 surface.
pub fn iso_surface(
    base: &SystemParams,
    grid: &IsoGrid,
    settings: &IsoSettings,
) -> Result<IsoSurface, DisorderError> {
    for a in 0..3 {
        check_axis(AXIS_NAMES[a], grid.axis(a)).map_err(DisorderError::InvalidSpec)?;
    }
    settings.loss.validate()?;
    if !(settings.eta.is_finite() && settings.eta > 0.0) {
        return Err(DisorderError::InvalidSpec(format!("eta must be positive (got {})", settings.eta)));
    }
    settings.spec.validate()?;

    let solver = MeanField::new(base.model());
    let clean = CleanLobe::compute(&solver, base, settings.lobe)?;
    let loss_rate = polariton_loss_rate(base, &settings.loss);
    let threshold = settings.eta * loss_rate;

    let [ns, nd, nn] = grid.dims();
    let points: Vec<IsoPoint> = (0..grid.len())
        .into_par_iter()
        .map(|p| {
            let (i, j, k) = (p / (nd * nn), (p / nn) % nd, p % nn);
            let spec = DisorderSpec {
                sigma_omega: grid.sigma_omega[i],
                delta_g: settings.coupling_axis.half_range(grid.delta_g[j]),
                n_sigma: grid.n_sigma[k],
                ..settings.spec.clone()
            };
            let stats = disorder_stats(&spec, base)?;
            let t_c_disordered = bg_mi_tunneling(&clean, &stats);
            Ok(IsoPoint {
                index: [i, j, k],
                sigma_omega: spec.sigma_omega,
                delta_g_axis: grid.delta_g[j],
                delta_g: spec.delta_g,
                n_sigma: spec.n_sigma,
                stats,
                t_c_disordered,
                marker: clean.c_ph_sq * t_c_disordered - threshold,
            })
        })
        .collect::<Result<_, DisorderError>>()?;

    let nonneg = |p: &IsoPoint| p.marker >= 0.0;
    if points.iter().all(nonneg) || !points.iter().any(nonneg) {
        return Err(DisorderError::SurfaceOutsideRange {
            positive: nonneg(&points[0]),
        });
    }

    let coords = |i: usize, j: usize, k: usize| [grid.sigma_omega[i], grid.delta_g[j], grid.n_sigma[k]];
    let mut boundary = Vec::new();
    for i in 0..ns {
        for j in 0..nd {
            for k in 0..nn {
                let a = &points[grid.index(i, j, k)];
                let neighbours = [(i + 1, j, k), (i, j + 1, k), (i, j, k + 1)];
                for (axis, &(ii, jj, kk)) in neighbours.iter().enumerate() {
                    if ii >= ns || jj >= nd || kk >= nn {
                        continue;
                    }
                    let b = &points[grid.index(ii, jj, kk)];
                    if nonneg(a) != nonneg(b) {
                        let mut c = coords(i, j, k);
                        let cb = coords(ii, jj, kk);
                        c[axis] = crossing(c[axis], a.marker, cb[axis], b.marker);
                        boundary.push(c);
                    }
                }
            }
        }
    }

    let intercepts = (0..3)
        .map(|axis| {
            let line: Vec<&IsoPoint> = (0..grid.dims()[axis])
                .map(|m| {
                    let mut idx = [0usize; 3];
                    idx[axis] = m;
                    &points[grid.index(idx[0], idx[1], idx[2])]
                })
                .collect();
            let values = grid.axis(axis);
            let first_neg = line.iter().position(|p| !nonneg(p));
            let (last_nonnegative, crossing_at) = match first_neg {
                None => (Some(values[values.len() - 1]), None),
                Some(0) => (None, None),
                Some(m) => (
                    Some(values[m - 1]),
                    Some(crossing(values[m - 1], line[m - 1].marker, values[m], line[m].marker)),
                ),
            };
            AxisIntercept {
                axis: AXIS_NAMES[axis].to_string(),
                last_nonnegative,
                crossing: crossing_at,
                beyond_range: first_neg.is_none(),
            }
        })
        .collect();

    Ok(IsoSurface {
        clean,
        loss_rate,
        eta: settings.eta,
        dims: grid.dims(),
        points,
        boundary,
        intercepts,
    })
}
