//! Derived quantities: polariton interaction energy, photon fraction, loss
//! rate, the equilibrium Q requirement, the Bose-Hubbard likeness ratio and the
//! doping-density cross-check.

use crate::meanfield::{MeanField, MeanFieldError};
use crate::eigen::EigenError;
use crate::model::manifold_energy;
use crate::params::{require_positive, ModelParams, ParamError, SystemParams};
use serde::{Deserialize, Serialize};

/// Loss channels entering the equilibrium condition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LossParams {
    /// Exciton spontaneous-emission lifetime (s).
    pub tau_e: f64,
    /// Purcell factor applied to the exciton decay rate.
    pub purcell_f: f64,
    /// Cavity quality factor.
    pub q_cavity: f64,
    /// Required ratio of polariton tunneling to loss.
    pub eta: f64,
}

impl Default for LossParams {
    fn default() -> Self {
        Self {
            tau_e: 1e-9,
            purcell_f: 0.2,
            q_cavity: 1e6,
            eta: 1.0,
        }
    }
}

impl LossParams {
    pub fn validate(&self) -> Result<(), ParamError> {
        require_positive("tau_e", self.tau_e)?;
        require_positive("purcell_f", self.purcell_f)?;
        require_positive("q_cavity", self.q_cavity)?;
        require_positive("eta", self.eta)?;
        Ok(())
    }

    pub fn with_eta(self, eta: f64) -> Self {
        Self { eta, ..self }
    }

    pub fn with_q(self, q_cavity: f64) -> Self {
        Self { q_cavity, ..self }
    }
}

/// Photon and exciton weights of the lower polariton.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PolaritonComposition {
    pub c_ph_sq: f64,
    pub c_ex_sq: f64,
}

/// U = E(2) − 2E(1) in units of g.
pub fn interaction_energy(model: &ModelParams) -> Result<f64, EigenError> {
    Ok(manifold_energy(model, 2)? - 2.0 * manifold_energy(model, 1)?)
}

/// Lower-polariton composition of the one-excitation manifold,
/// |c_ph|² = ½(1 − Δ/√(Δ² + 4N g²)).
pub fn polariton_fractions(model: &ModelParams) -> PolaritonComposition {
    let d = model.detuning;
    let root = (d * d + 4.0 * model.big_n as f64).sqrt();
    // split the two forms so neither side cancels catastrophically
    let (c_ph_sq, c_ex_sq) = if d >= 0.0 {
        let c_ph = 2.0 * model.big_n as f64 / (root * (root + d));
        (c_ph, 0.5 * (1.0 + d / root))
    } else {
        let c_ex = 2.0 * model.big_n as f64 / (root * (root - d));
        (0.5 * (1.0 - d / root), c_ex)
    };
    PolaritonComposition { c_ph_sq, c_ex_sq }
}

/// Γ = |c_ph|² ω_ph / Q + |c_ex|² F / τ_e (1/s).
pub fn polariton_loss_rate(params: &SystemParams, loss: &LossParams) -> f64 {
    let c = polariton_fractions(&params.model());
    c.c_ph_sq * params.omega_ph() / loss.q_cavity + c.c_ex_sq * loss.purcell_f / loss.tau_e
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum RequiredQ {
    Reachable(f64),
    /// Exciton decay alone exceeds the tunneling budget; no cavity Q suffices.
    Unreachable,
}

impl RequiredQ {
    pub fn value(&self) -> Option<f64> {
        match self {
            RequiredQ::Reachable(q) => Some(*q),
            RequiredQ::Unreachable => None,
        }
    }
}

/// Cavity Q at which polariton tunneling `t_c` (rad/s) exceeds the loss
/// rate by the factor η:
/// Q_r = |c_ph|² ω_ph / (|c_ph|² t_c / η − |c_ex|² F / τ_e).
pub fn required_q(params: &SystemParams, loss: &LossParams, t_c: f64) -> RequiredQ {
    let c = polariton_fractions(&params.model());
    let budget = c.c_ph_sq * t_c / loss.eta - c.c_ex_sq * loss.purcell_f / loss.tau_e;
    if !(budget > 0.0) || !t_c.is_finite() {
        return RequiredQ::Unreachable;
    }
    RequiredQ::Reachable(c.c_ph_sq * params.omega_ph() / budget)
}

/// U / (|c_ph|² t_c) for lobe 1.
pub fn bhm_ratio(solver: &MeanField) -> Result<f64, MeanFieldError> {
    let u = interaction_energy(solver.model())?;
    let c = polariton_fractions(solver.model());
    let t_c = solver.critical_tunneling(1)?.t_c;
    Ok(u / (c.c_ph_sq * t_c))
}

/// Mode volume (λ / n_refr)³ in nm³.
pub fn mode_volume(wavelength_nm: f64, refractive_index: f64) -> f64 {
    (wavelength_nm / refractive_index).powi(3)
}

/// Impurity density N / V in cm⁻³.
pub fn doping_density(big_n: f64, wavelength_nm: f64, refractive_index: f64) -> f64 {
    const CM3_PER_NM3: f64 = 1e-21;
    big_n / (mode_volume(wavelength_nm, refractive_index) * CM3_PER_NM3)
}
