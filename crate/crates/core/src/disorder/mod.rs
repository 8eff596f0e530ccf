//! Site-to-site disorder in photon frequency, impurity couplings and impurity
//! number, its effect on the Mott lobes, and the scan for the region where
//! the insulator transition survives.
//!
//! Every Monte-Carlo sample draws from its own counter-based stream keyed by
//! (seed, sample index), with a separate key per random quantity. Samples
//! therefore do not depend on scheduling, and the same index sees the same
//! underlying uniforms at every disorder strength (common random numbers),
//! which keeps scans smooth and monotone.

mod iso;
mod site;

pub use iso::{iso_surface, AxisIntercept, CouplingAxis, IsoGrid, IsoPoint, IsoSettings, IsoSurface};
pub use site::{
    one_excitation_energy, site_energies_collective, site_energies_exact, SiteEnergies,
    DEFAULT_SUBSPACE_BUDGET,
};

use crate::eigen::EigenError;
use crate::meanfield::{MeanField, MeanFieldError};
use crate::observables::polariton_fractions;
use crate::params::{ParamError, SystemParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DisorderError {
    #[error("invalid disorder spec: {0}")]
    InvalidSpec(String),
    #[error("two-excitation dimension {dim} exceeds the budget {budget}")]
    SubspaceBudget { dim: usize, budget: usize },
    #[error("no sample had an impurity; cannot form statistics")]
    NoValidSamples,
    #[error("marker has uniform sign ({}) over the whole grid; the surface lies outside the scanned range", if *.positive { "f ≥ 0" } else { "f < 0" })]
    SurfaceOutsideRange { positive: bool },
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    Eigen(#[from] EigenError),
    #[error(transparent)]
    MeanField(#[from] MeanFieldError),
}

/// Impurity-number distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum NumberDistribution {
    /// Poisson with mean `n_mean`; `n_sigma` is ignored.
    Poisson,
    /// Binomial(M, n_mean/M) with M matched to `n_sigma`; Poisson once
    /// n_sigma² ≥ n_mean, fixed count when n_sigma = 0.
    #[default]
    SubPoisson,
}

/// How the site energies are obtained from a sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SiteMethod {
    #[default]
    Exact,
    Collective,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DisorderSpec {
    /// Standard deviation of ω_ph (rad/s).
    pub sigma_omega: f64,
    /// g_k ~ Uniform[g(1 − delta_g), g]; in units of g.
    pub delta_g: f64,
    pub n_mean: f64,
    /// Target standard deviation of N (counts).
    pub n_sigma: f64,
    #[serde(default)]
    pub n_dist: NumberDistribution,
    #[serde(default = "default_sample_count")]
    pub sample_count: usize,
    #[serde(default)]
    pub seed: u64,
    /// Lower tail of the central-quantile interval used for ΔE and ΔU.
    #[serde(default = "default_quantile")]
    pub quantile: f64,
    #[serde(default)]
    pub method: SiteMethod,
    #[serde(default = "default_budget")]
    pub subspace_budget: usize,
}

fn default_sample_count() -> usize {
    10_000
}
fn default_quantile() -> f64 {
    0.005
}
fn default_budget() -> usize {
    DEFAULT_SUBSPACE_BUDGET
}

/// Largest mean impurity count the number samplers accept.
pub const MAX_N_MEAN: f64 = 500.0;

impl DisorderSpec {
    /// No disorder around a mean count `n_mean`.
    pub fn clean(n_mean: f64) -> Self {
        Self {
            sigma_omega: 0.0,
            delta_g: 0.0,
            n_mean,
            n_sigma: 0.0,
            n_dist: NumberDistribution::SubPoisson,
            sample_count: default_sample_count(),
            seed: 0,
            quantile: default_quantile(),
            method: SiteMethod::Exact,
            subspace_budget: DEFAULT_SUBSPACE_BUDGET,
        }
    }

    pub fn validate(&self) -> Result<(), DisorderError> {
        let bad = |m: String| Err(DisorderError::InvalidSpec(m));
        if !(self.sigma_omega.is_finite() && self.sigma_omega >= 0.0) {
            return bad(format!("sigma_omega must be ≥ 0 (got {})", self.sigma_omega));
        }
        if !(0.0..=1.0).contains(&self.delta_g) {
            return bad(format!("delta_g must lie in [0, 1] (got {})", self.delta_g));
        }
        if !(self.n_mean > 0.0 && self.n_mean <= MAX_N_MEAN) {
            return bad(format!("n_mean must lie in (0, {MAX_N_MEAN}] (got {})", self.n_mean));
        }
        if !(self.n_sigma.is_finite() && self.n_sigma >= 0.0) {
            return bad(format!("n_sigma must be ≥ 0 (got {})", self.n_sigma));
        }
        if self.n_dist == NumberDistribution::SubPoisson && self.n_sigma > self.n_mean.sqrt() * (1.0 + 1e-12) {
            return bad(format!(
                "sub-Poisson n_sigma = {} exceeds √n_mean = {}",
                self.n_sigma,
                self.n_mean.sqrt()
            ));
        }
        if self.sample_count == 0 {
            return bad("sample_count must be positive".into());
        }
        if !(self.quantile >= 0.0 && self.quantile < 0.5) {
            return bad(format!("quantile must lie in [0, 0.5) (got {})", self.quantile));
        }
        Ok(())
    }

    /// The impurity-count law actually sampled.
    pub fn count_law(&self) -> CountLaw {
        let var = self.n_sigma * self.n_sigma;
        match self.n_dist {
            NumberDistribution::Poisson => CountLaw::Poisson { mean: self.n_mean },
            NumberDistribution::SubPoisson if self.n_sigma == 0.0 => CountLaw::Fixed(self.n_mean.round() as usize),
            NumberDistribution::SubPoisson if var >= self.n_mean => CountLaw::Poisson { mean: self.n_mean },
            NumberDistribution::SubPoisson => {
                let trials = (self.n_mean * self.n_mean / (self.n_mean - var)).round().max(self.n_mean.ceil());
                if trials > 1e6 {
                    CountLaw::Poisson { mean: self.n_mean }
                } else {
                    let trials = trials as usize;
                    CountLaw::Binomial {
                        trials,
                        p: (self.n_mean / trials as f64).min(1.0),
                    }
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum CountLaw {
    Fixed(usize),
    Poisson { mean: f64 },
    Binomial { trials: usize, p: f64 },
}

impl CountLaw {
    /// Inverse CDF: the smallest k with P(N ≤ k) > u. A single uniform per
    /// draw keeps counts monotone in u across different laws.
    pub fn quantile(&self, u: f64) -> usize {
        match *self {
            CountLaw::Fixed(n) => n,
            CountLaw::Poisson { mean } => {
                let mut p = (-mean).exp();
                let mut cdf = p;
                let mut k = 0usize;
                while cdf <= u && k < 100_000 {
                    k += 1;
                    p *= mean / k as f64;
                    cdf += p;
                    if p == 0.0 && k as f64 > mean {
                        break;
                    }
                }
                k
            }
            CountLaw::Binomial { trials, p } => {
                if p >= 1.0 {
                    return trials;
                }
                let ratio = p / (1.0 - p);
                let mut pk = (1.0 - p).powi(trials as i32);
                let mut cdf = pk;
                let mut k = 0usize;
                while cdf <= u && k < trials {
                    pk *= (trials - k) as f64 / (k + 1) as f64 * ratio;
                    k += 1;
                    cdf += pk;
                }
                k
            }
        }
    }

    pub fn mean(&self) -> f64 {
        match *self {
            CountLaw::Fixed(n) => n as f64,
            CountLaw::Poisson { mean } => mean,
            CountLaw::Binomial { trials, p } => trials as f64 * p,
        }
    }

    pub fn variance(&self) -> f64 {
        match *self {
            CountLaw::Fixed(_) => 0.0,
            CountLaw::Poisson { mean } => mean,
            CountLaw::Binomial { trials, p } => trials as f64 * p * (1.0 - p),
        }
    }
}

/// One disordered cavity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SiteSample {
    /// Site photon frequency (rad/s).
    pub omega_ph_site: f64,
    /// Couplings g_k in units of the mean-free coupling g; length `n_site`.
    pub g_list: Vec<f64>,
    pub n_site: usize,
}

// independent keys for the three random quantities
const KEY_OMEGA: u64 = 0x6f6d_6567_615f_7068;
const KEY_COUNT: u64 = 0x636f_756e_745f_6e6e;
const KEY_COUPLING: u64 = 0x636f_7570_6c69_6e67;

fn stream(seed: u64, key: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ key);
    rng.set_stream(index);
    rng
}

/// Draws site `index` of the ensemble. Deterministic in (seed, index).
pub fn sample_site(spec: &DisorderSpec, base: &SystemParams, index: u64) -> SiteSample {
    let z: f64 = stream(spec.seed, KEY_OMEGA, index).sample(StandardNormal);
    let u: f64 = stream(spec.seed, KEY_COUNT, index).gen();
    let n_site = spec.count_law().quantile(u);
    let mut rng = stream(spec.seed, KEY_COUPLING, index);
    let g_list = (0..n_site).map(|_| 1.0 - spec.delta_g * rng.gen::<f64>()).collect();
    SiteSample {
        omega_ph_site: base.omega_ph() + spec.sigma_omega * z,
        g_list,
        n_site,
    }
}

/// Energies of a sample in units of g, relative to n·ω_ex.
pub fn site_energies(
    spec: &DisorderSpec,
    base: &SystemParams,
    sample: &SiteSample,
) -> Result<SiteEnergies, DisorderError> {
    let detuning = (sample.omega_ph_site - base.omega_ex()) / base.g();
    match spec.method {
        SiteMethod::Exact => site_energies_exact(detuning, &sample.g_list, spec.subspace_budget),
        SiteMethod::Collective => site_energies_collective(detuning, &sample.g_list),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DisorderStats {
    /// Central-quantile half-width of the site ground energy E1 (rad/s).
    pub delta_e: f64,
    /// Central-quantile half-width of U_site (rad/s).
    pub delta_u: f64,
    pub e_mean: f64,
    pub u_mean: f64,
    pub e_std: f64,
    pub u_std: f64,
    pub sample_count: usize,
    /// Samples with at least one impurity.
    pub valid_count: usize,
    pub empty_fraction: f64,
    pub quantile_q: f64,
}

/// Linear-interpolation quantile of ascending data.
fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let i = pos.floor() as usize;
    let frac = pos - i as f64;
    if i + 1 >= sorted.len() {
        return sorted[sorted.len() - 1];
    }
    sorted[i] + frac * (sorted[i + 1] - sorted[i])
}

fn mean_std(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Half-width of the central [q, 1 − q] interval.
fn central_half_width(mut v: Vec<f64>, q: f64) -> f64 {
    v.sort_by(f64::total_cmp);
    0.5 * (quantile_sorted(&v, 1.0 - q) - quantile_sorted(&v, q))
}

/// Monte-Carlo fluctuation widths of E1 and U. Empty sites are counted in
/// `empty_fraction` but carry no polariton and enter neither width.
pub fn disorder_stats(spec: &DisorderSpec, base: &SystemParams) -> Result<DisorderStats, DisorderError> {
    spec.validate()?;
    let energies: Vec<Option<SiteEnergies>> = (0..spec.sample_count as u64)
        .into_par_iter()
        .map(|i| {
            let s = sample_site(spec, base, i);
            if s.n_site == 0 {
                Ok(None)
            } else {
                site_energies(spec, base, &s).map(Some)
            }
        })
        .collect::<Result<_, _>>()?;
    let valid: Vec<SiteEnergies> = energies.iter().flatten().copied().collect();
    if valid.is_empty() {
        return Err(DisorderError::NoValidSamples);
    }
    let g = base.g();
    let e: Vec<f64> = valid.iter().map(|s| s.e1 * g).collect();
    let u: Vec<f64> = valid.iter().map(|s| s.u * g).collect();
    let (e_mean, e_std) = mean_std(&e);
    let (u_mean, u_std) = mean_std(&u);
    Ok(DisorderStats {
        delta_e: central_half_width(e, spec.quantile),
        delta_u: central_half_width(u, spec.quantile),
        e_mean,
        u_mean,
        e_std,
        u_std,
        sample_count: spec.sample_count,
        valid_count: valid.len(),
        empty_fraction: (spec.sample_count - valid.len()) as f64 / spec.sample_count as f64,
        quantile_q: spec.quantile,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LobeSurvival {
    pub survives: bool,
    pub effective_width: f64,
}

/// Lobe n is destroyed once 2ΔE + (2n − 1)ΔU ≥ U.
pub fn lobe_survival(u: f64, delta_e: f64, delta_u: f64, n: usize) -> LobeSurvival {
    let width = (u - 2.0 * delta_e - (2.0 * n as f64 - 1.0) * delta_u).max(0.0);
    LobeSurvival {
        survives: width > 0.0,
        effective_width: width,
    }
}

/// Clean-lattice reference for lobe n in physical units (rad/s).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CleanLobe {
    pub n: usize,
    /// Lobe width at zero tunneling (U for n = 1).
    pub u: f64,
    pub t_c: f64,
    pub c_ph_sq: f64,
}

impl CleanLobe {
    pub fn compute(solver: &MeanField, base: &SystemParams, n: usize) -> Result<Self, DisorderError> {
        let width = solver.mott_lobe_mu_range(n)?.width();
        let t_c = solver.critical_tunneling(n)?.t_c;
        Ok(Self {
            n,
            u: width * base.g(),
            t_c: t_c * base.g(),
            c_ph_sq: polariton_fractions(solver.model()).c_ph_sq,
        })
    }
}

/// Critical tunneling of the disordered lobe under linear shrinkage:
/// t_c × effective width / U.
pub fn bg_mi_tunneling(clean: &CleanLobe, stats: &DisorderStats) -> f64 {
    let s = lobe_survival(clean.u, stats.delta_e, stats.delta_u, clean.n);
    if !s.survives {
        return 0.0;
    }
    clean.t_c * (s.effective_width / clean.u)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> SystemParams {
        SystemParams::reference_defaults(3, 12.0).unwrap()
    }

    #[test]
    fn clean_samples_are_identical() {
        let spec = DisorderSpec::clean(3.0);
        let b = base();
        for i in 0..20 {
            let s = sample_site(&spec, &b, i);
            assert_eq!(s.n_site, 3);
            assert_eq!(s.omega_ph_site, b.omega_ph());
            assert!(s.g_list.iter().all(|&g| g == 1.0));
        }
    }

    #[test]
    fn coupling_bounds() {
        let spec = DisorderSpec {
            delta_g: 0.14,
            ..DisorderSpec::clean(5.0)
        };
        for i in 0..500 {
            let s = sample_site(&spec, &base(), i);
            assert!(s.g_list.iter().all(|&g| (0.86..=1.0).contains(&g)));
        }
    }

    #[test]
    fn poisson_moments() {
        let spec = DisorderSpec {
            n_dist: NumberDistribution::Poisson,
            seed: 7,
            ..DisorderSpec::clean(3.0)
        };
        let law = spec.count_law();
        let counts: Vec<f64> = (0..100_000u64)
            .map(|i| {
                let u: f64 = stream(spec.seed, KEY_COUNT, i).gen();
                law.quantile(u) as f64
            })
            .collect();
        let (m, s) = mean_std(&counts);
        assert!((m - 3.0).abs() < 0.02, "mean {m}");
        assert!((s * s - 3.0).abs() < 0.1, "var {}", s * s);
    }

    #[test]
    fn sub_poisson_matches_target() {
        let spec = DisorderSpec {
            n_sigma: 1.0,
            ..DisorderSpec::clean(3.0)
        };
        let law = spec.count_law();
        assert_eq!(law, CountLaw::Binomial { trials: 5, p: 0.6 });
        assert!((law.variance() - 1.2).abs() < 1e-12);
        let spec = DisorderSpec {
            n_sigma: 2.0,
            ..DisorderSpec::clean(3.0)
        };
        assert!(spec.validate().is_err());
    }

    #[test]
    fn count_quantiles_are_monotone() {
        let law = CountLaw::Binomial { trials: 9, p: 1.0 / 3.0 };
        let mut last = 0;
        for k in 0..=1000 {
            let q = law.quantile(k as f64 / 1000.0 * 0.999_999);
            assert!(q >= last);
            last = q;
        }
    }

    #[test]
    fn zero_width_statistics() {
        let spec = DisorderSpec {
            sample_count: 200,
            ..DisorderSpec::clean(3.0)
        };
        let st = disorder_stats(&spec, &base()).unwrap();
        assert_eq!(st.delta_e, 0.0);
        assert_eq!(st.delta_u, 0.0);
        assert_eq!(st.empty_fraction, 0.0);
    }

    #[test]
    fn all_empty_is_an_error() {
        let spec = DisorderSpec {
            sample_count: 10,
            ..DisorderSpec::clean(0.4)
        };
        assert!(matches!(disorder_stats(&spec, &base()), Err(DisorderError::NoValidSamples)));
    }

    #[test]
    fn survival_arithmetic() {
        assert_eq!(lobe_survival(1.0, 0.0, 0.0, 1), LobeSurvival { survives: true, effective_width: 1.0 });
        assert_eq!(lobe_survival(1.0, 0.5, 0.0, 1), LobeSurvival { survives: false, effective_width: 0.0 });
        let s = lobe_survival(1.0, 0.1, 0.2, 2);
        assert!(s.survives && (s.effective_width - 0.2).abs() < 1e-15);
    }

    #[test]
    fn shrinkage_is_linear() {
        let clean = CleanLobe { n: 1, u: 2.0, t_c: 0.3, c_ph_sq: 0.1 };
        let mut st = disorder_stats(&DisorderSpec { sample_count: 10, ..DisorderSpec::clean(3.0) }, &base()).unwrap();
        assert_eq!(bg_mi_tunneling(&clean, &st), 0.3);
        st.delta_e = 0.5;
        assert!((bg_mi_tunneling(&clean, &st) - 0.15).abs() < 1e-15);
        st.delta_e = 1.0;
        assert_eq!(bg_mi_tunneling(&clean, &st), 0.0);
    }
}
