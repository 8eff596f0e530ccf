//! Decoupled (mean-field) treatment of the polariton lattice.
//!
//! Hopping between neighbouring cavities is replaced by a real photon order
//! parameter ψ = ⟨a⟩; each site then sees the drive −z t ψ (a† + a) plus the
//! constant z t ψ². The ground-state energy is minimized over ψ; a vanishing
//! minimizer means a Mott insulator, a finite one a superfluid.
//!
//! All quantities are in units of g, μ is measured from ω_ex.

mod boundary;
pub(crate) mod grid;
mod oracle;

pub use boundary::{LobeRange, CriticalPoint};
pub use grid::{PhaseGrid, PhaseGridError};
pub use oracle::{bhm_boundary_oracle, bhm_lobe_tip, curvature_boundary, curvature_critical};

use crate::eigen::EigenError;
use crate::model::{zero_hopping_filling, ModelError, SiteOperator};
use crate::optimize::golden_section_min;
use crate::params::ModelParams;
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeanFieldError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("photon cutoff did not converge below n_max = {n_max} (last change {change:e})")]
    CutoffNotConverged { n_max: usize, change: f64 },
    #[error("order-parameter search ran away: minimum still at the edge of ψ ≤ {psi_max}")]
    PsiRunaway { psi_max: f64 },
    #[error("μ = {mu} lies outside Mott lobe {n} ({lower}, {upper})")]
    MuOutsideLobe { n: usize, mu: f64, lower: f64, upper: f64 },
    #[error("Mott lobe {n} is empty")]
    EmptyLobe { n: usize },
    #[error("boundary search at μ = {mu} is not bracketed: {reason}")]
    NotBracketed { mu: f64, reason: String },
    #[error("energy unbounded below at t = {t}, μ = {mu}: photon band bottom Δ − z t lies below μ")]
    Unbounded { t: f64, mu: f64 },
    #[error("{0}")]
    InvalidArgument(String),
}

impl From<EigenError> for MeanFieldError {
    fn from(e: EigenError) -> Self {
        MeanFieldError::Model(ModelError::Eigen(e))
    }
}

/// Numerical knobs of the mean-field solver.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverOptions {
    /// ψ below this counts as zero (Mott insulator).
    pub psi_zero_tol: f64,
    /// Points of the coarse ψ scan preceding golden-section refinement.
    pub coarse_points: usize,
    /// Final ψ bracket width of the golden-section refinement.
    pub psi_tol: f64,
    /// Initial photon cutoff is the zero-hopping filling plus this margin.
    pub cutoff_margin: usize,
    /// Relative energy change tolerated when the cutoff grows by two.
    pub cutoff_tol: f64,
    pub max_cutoff: usize,
    /// Highest filling considered when locating the ψ = 0 ground manifold.
    pub max_filling: usize,
    /// Number of times ψ_max may double before giving up.
    pub max_psi_doublings: usize,
    /// Relative width at which the tunneling bisection stops.
    pub boundary_rel_tol: f64,
    /// Absolute μ tolerance (units of g) of the lobe-tip search.
    pub tip_mu_tol: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            psi_zero_tol: 1e-4,
            coarse_points: 64,
            psi_tol: 1e-6,
            cutoff_margin: 6,
            cutoff_tol: 1e-8,
            max_cutoff: 80,
            max_filling: 60,
            max_psi_doublings: 8,
            boundary_rel_tol: 1e-4,
            tip_mu_tol: 1e-4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Phase {
    MottInsulator { filling: usize },
    Superfluid,
}

impl Phase {
    pub fn is_insulating(&self) -> bool {
        matches!(self, Phase::MottInsulator { .. })
    }

    pub fn filling(&self) -> Option<usize> {
        match self {
            Phase::MottInsulator { filling } => Some(*filling),
            Phase::Superfluid => None,
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Phase::MottInsulator { .. } => f.write_str("MI"),
            Phase::Superfluid => f.write_str("SF"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffEnergy {
    pub energy: f64,
    pub n_max: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderParameterMinimum {
    pub psi: f64,
    pub energy: f64,
    pub n_max: usize,
    pub psi_max: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanPoint {
    pub t: f64,
    pub mu: f64,
    pub psi_star: f64,
    pub e_star: f64,
    pub phase: Phase,
    pub n_max: usize,
}

/// Mean-field solver for one set of model parameters.
#[derive(Debug, Clone)]
pub struct MeanField {
    model: ModelParams,
    options: SolverOptions,
}

impl MeanField {
    pub fn new(model: ModelParams) -> Self {
        Self::with_options(model, SolverOptions::default())
    }

    pub fn with_options(model: ModelParams, options: SolverOptions) -> Self {
        Self { model, options }
    }

    pub fn model(&self) -> &ModelParams {
        &self.model
    }

    pub fn options(&self) -> &SolverOptions {
        &self.options
    }

    fn check_t_mu(t: f64, mu: f64) -> Result<(), MeanFieldError> {
        if !(t.is_finite() && t >= 0.0) {
            return Err(MeanFieldError::InvalidArgument(format!(
                "tunneling must be finite and non-negative, got {t}"
            )));
        }
        if !mu.is_finite() {
            return Err(MeanFieldError::InvalidArgument(format!(
                "chemical potential must be finite, got {mu}"
            )));
        }
        Ok(())
    }

    /// The impurity energy is bounded and grows at most like √n with photon
    /// number, so the mean-field energy has a floor exactly when the bare photon
    /// band bottom Δ − z t sits above μ.
    pub fn check_bounded(&self, t: f64, mu: f64) -> Result<(), MeanFieldError> {
        if self.model.z as f64 * t >= self.model.detuning - mu {
            Err(MeanFieldError::Unbounded { t, mu })
        } else {
            Ok(())
        }
    }

    /// Filling of the ψ = 0 ground state (ties resolve to the lower filling).
    pub fn zero_hopping_filling(&self, mu: f64) -> Result<usize, MeanFieldError> {
        Ok(zero_hopping_filling(&self.model, mu, self.options.max_filling)?.0)
    }

    fn initial_cutoff(&self, mu: f64) -> Result<usize, MeanFieldError> {
        Ok(self.zero_hopping_filling(mu)? + self.options.cutoff_margin)
    }

    fn converged(&self, a: f64, b: f64) -> bool {
        (a - b).abs() <= self.options.cutoff_tol * a.abs().max(b.abs()).max(1.0)
    }

    /// Lowest eigenvalue of the site Hamiltonian at fixed ψ, with the photon
    /// cutoff raised in steps of two until it stops moving.
    pub fn ground_energy_at_psi(
        &self,
        t: f64,
        mu: f64,
        psi: f64,
    ) -> Result<CutoffEnergy, MeanFieldError> {
        Self::check_t_mu(t, mu)?;
        if !(psi.is_finite() && psi >= 0.0) {
            return Err(MeanFieldError::InvalidArgument(format!(
                "order parameter must be finite and non-negative, got {psi}"
            )));
        }
        // at fixed ψ the drive is linear, so only μ ≥ Δ lacks a floor
        self.check_bounded(0.0, mu)?;
        let mut n_max = self.initial_cutoff(mu)?;
        let mut prev = SiteOperator::new(&self.model, n_max, mu)?.ground_energy(t, psi)?;
        let mut change = f64::NAN;
        loop {
            let next_cut = n_max + 2;
            if next_cut > self.options.max_cutoff {
                return Err(MeanFieldError::CutoffNotConverged { n_max, change });
            }
            let next = SiteOperator::new(&self.model, next_cut, mu)?.ground_energy(t, psi)?;
            change = next - prev;
            if self.converged(prev, next) {
                return Ok(CutoffEnergy {
                    energy: next,
                    n_max: next_cut,
                });
            }
            prev = next;
            n_max = next_cut;
        }
    }

    fn minimize_with(
        &self,
        op: &SiteOperator,
        t: f64,
    ) -> Result<(f64, f64, f64), MeanFieldError> {
        let e0 = op.ground_energy(t, 0.0)?;
        if t == 0.0 {
            return Ok((0.0, e0, 0.0));
        }
        let points = self.options.coarse_points.max(3);
        let mut psi_max = (op.basis().n_max() as f64).sqrt() / 2.0;
        for _ in 0..=self.options.max_psi_doublings {
            let step = psi_max / (points - 1) as f64;
            let mut best = (0usize, e0);
            for i in 1..points {
                let e = op.ground_energy(t, i as f64 * step)?;
                if e < best.1 {
                    best = (i, e);
                }
            }
            if best.0 == points - 1 {
                psi_max *= 2.0;
                continue;
            }
            let lo = best.0.saturating_sub(1) as f64 * step;
            let hi = (best.0 + 1) as f64 * step;
            let (psi_g, e_g) =
                golden_section_min(|p| op.ground_energy(t, p), lo, hi, self.options.psi_tol)?;
            let mut result = (0.0, e0);
            if best.1 < result.1 {
                result = (best.0 as f64 * step, best.1);
            }
            if e_g < result.1 {
                result = (psi_g, e_g);
            }
            return Ok((result.0, result.1, psi_max));
        }
        Err(MeanFieldError::PsiRunaway { psi_max })
    }

    /// ψ* = argmin over ψ ≥ 0 of the ground energy: coarse scan then
    /// golden-section refinement, repeated with a larger photon cutoff until
    /// the energy at ψ* is converged.
    pub fn minimize_order_parameter(
        &self,
        t: f64,
        mu: f64,
    ) -> Result<OrderParameterMinimum, MeanFieldError> {
        Self::check_t_mu(t, mu)?;
        self.check_bounded(t, mu)?;
        let mut n_max = self.initial_cutoff(mu)?;
        let mut op = SiteOperator::new(&self.model, n_max, mu)?;
        let mut change = f64::NAN;
        loop {
            let (psi, energy, psi_max) = self.minimize_with(&op, t)?;
            let next_cut = n_max + 2;
            if next_cut > self.options.max_cutoff {
                return Err(MeanFieldError::CutoffNotConverged { n_max, change });
            }
            let next = SiteOperator::new(&self.model, next_cut, mu)?;
            let check = next.ground_energy(t, psi)?;
            change = check - energy;
            if self.converged(energy, check) {
                return Ok(OrderParameterMinimum {
                    psi,
                    energy,
                    n_max,
                    psi_max,
                });
            }
            n_max = next_cut;
            op = next;
        }
    }

    /// Phase at (t, μ). Where the energy is unbounded below (photons condense
    /// without limit) the cell is superfluid with ψ* = ∞ and n_max = 0.
    pub fn classify_phase(&self, t: f64, mu: f64) -> Result<ScanPoint, MeanFieldError> {
        let min = match self.minimize_order_parameter(t, mu) {
            Ok(m) => m,
            Err(MeanFieldError::Unbounded { .. }) => {
                return Ok(ScanPoint {
                    t,
                    mu,
                    psi_star: f64::INFINITY,
                    e_star: f64::NEG_INFINITY,
                    phase: Phase::Superfluid,
                    n_max: 0,
                })
            }
            Err(e) => return Err(e),
        };
        let phase = if min.psi < self.options.psi_zero_tol {
            Phase::MottInsulator {
                filling: self.zero_hopping_filling(mu)?,
            }
        } else {
            Phase::Superfluid
        };
        Ok(ScanPoint {
            t,
            mu,
            psi_star: min.psi,
            e_star: min.energy,
            phase,
            n_max: min.n_max,
        })
    }

    pub fn is_superfluid(&self, t: f64, mu: f64) -> Result<bool, MeanFieldError> {
        match self.minimize_order_parameter(t, mu) {
            Ok(m) => Ok(m.psi >= self.options.psi_zero_tol),
            Err(MeanFieldError::Unbounded { .. }) => Ok(true),
            Err(e) => Err(e),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::manifold_energy;

    fn solver(big_n: usize, detuning: f64) -> MeanField {
        MeanField::new(ModelParams::new(big_n, 4, detuning).unwrap())
    }

    #[test]
    fn zero_hopping_is_insulating() {
        let mf = solver(8, 0.0);
        for mu in [-10.0, -2.73, -2.7, -2.5, -1.0] {
            let m = mf.minimize_order_parameter(0.0, mu).unwrap();
            assert_eq!(m.psi, 0.0);
        }
    }

    #[test]
    fn zero_hopping_energy_ignores_psi() {
        let mf = solver(8, 0.0);
        let a = mf.ground_energy_at_psi(0.0, -2.73, 0.0).unwrap().energy;
        let b = mf.ground_energy_at_psi(0.0, -2.73, 0.3).unwrap().energy;
        assert_eq!(a, b);
    }

    #[test]
    fn block_consistency_at_filling_one() {
        let mf = solver(8, 0.0);
        let e = mf.ground_energy_at_psi(0.0, -2.73, 0.0).unwrap().energy;
        let expected = manifold_energy(mf.model(), 1).unwrap() + 2.73;
        assert!((e - expected).abs() < 1e-10);
        assert!((e + 0.098_427_124_746).abs() < 1e-9);
    }

    #[test]
    fn large_psi_costs_energy() {
        let mf = solver(8, 0.0);
        let small = mf.ground_energy_at_psi(0.05, -2.73, 0.5).unwrap().energy;
        let large = mf.ground_energy_at_psi(0.05, -2.73, 20.0).unwrap();
        assert!(large.energy > small);
    }

    #[test]
    fn jaynes_cummings_vacuum_wins() {
        let mf = solver(1, 0.0);
        let m = mf.minimize_order_parameter(0.0, -1.5).unwrap();
        assert_eq!(m.psi, 0.0);
        assert!(m.energy.abs() < 1e-12);
    }

    #[test]
    fn classification() {
        let mf = solver(8, 0.0);
        assert_eq!(
            mf.classify_phase(0.0, -2.73).unwrap().phase,
            Phase::MottInsulator { filling: 1 }
        );
        assert_eq!(
            mf.classify_phase(0.0, -10.0).unwrap().phase,
            Phase::MottInsulator { filling: 0 }
        );
        let sf = mf.classify_phase(1.0, -2.73).unwrap();
        assert_eq!(sf.phase, Phase::Superfluid);
        assert!(sf.psi_star.is_infinite());
        let sf = mf.classify_phase(0.05, -2.73).unwrap();
        assert_eq!(sf.phase, Phase::Superfluid);
        assert!(sf.psi_star > 0.1 && sf.psi_star.is_finite());
    }

    #[test]
    fn rejects_bad_arguments() {
        let mf = solver(2, 0.0);
        assert!(mf.minimize_order_parameter(-0.1, 0.0).is_err());
        assert!(mf.minimize_order_parameter(0.1, f64::NAN).is_err());
        assert!(mf.ground_energy_at_psi(0.1, 0.0, -1.0).is_err());
        assert!(matches!(
            mf.minimize_order_parameter(0.3, -0.5),
            Err(MeanFieldError::Unbounded { .. })
        ));
    }
}
