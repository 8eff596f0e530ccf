//! Site energies with inhomogeneous couplings in the one- and two-excitation
//! sectors.
//!
//! With N impurities coupled with strengths g_k to one cavity mode, the
//! one-excitation sector holds the photon plus N single flips; the
//! two-excitation sector holds two photons, photon + one flip, and the
//! N(N−1)/2 flip pairs. Energies are in units of g relative to n·ω_ex.

use super::DisorderError;
use crate::eigen::{eigenvalues, SymmetricMatrix};
use crate::model::manifold_energy;
use crate::params::ModelParams;
use serde::Serialize;

/// Default cap on the two-excitation dimension (N = 100).
pub const DEFAULT_SUBSPACE_BUDGET: usize = 5_151;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SiteEnergies {
    /// Lowest one-excitation energy (injection energy of the first polariton).
    pub e1: f64,
    /// Lowest two-excitation energy.
    pub e2: f64,
    /// e2 − 2 e1.
    pub u: f64,
}

fn two_excitation_dim(n: usize) -> usize {
    1 + n + n * n.saturating_sub(1) / 2
}

/// Lowest one-excitation energy. The photon couples only to the bright
/// combination Σ g_k σ_k⁺ of norm √(Σ g_k²); the N − 1 dark flips sit at 0,
/// above the bright-photon doublet's lower branch.
pub fn one_excitation_energy(detuning: f64, couplings: &[f64]) -> f64 {
    let g2: f64 = couplings.iter().map(|g| g * g).sum();
    let half = 0.5 * detuning;
    if couplings.is_empty() {
        return detuning;
    }
    if g2 == 0.0 {
        return detuning.min(0.0);
    }
    half - (half * half + g2).sqrt()
}

/// Exact lowest energies of both sectors by dense diagonalization.
/// `detuning` is (ω_ph,site − ω_ex)/g and `couplings` are g_k/g.
pub fn site_energies_exact(
    detuning: f64,
    couplings: &[f64],
    budget: usize,
) -> Result<SiteEnergies, DisorderError> {
    let n = couplings.len();
    let dim2 = two_excitation_dim(n);
    if dim2 > budget {
        return Err(DisorderError::SubspaceBudget { dim: dim2, budget });
    }

    let e1 = one_excitation_energy(detuning, couplings);

    // 0: two photons; 1..=n: photon + flip k; then pairs (k < l)
    let mut two = SymmetricMatrix::zeros(dim2);
    two.set(0, 0, 2.0 * detuning);
    for (k, g) in couplings.iter().enumerate() {
        two.set(k + 1, k + 1, detuning);
        two.set(0, k + 1, std::f64::consts::SQRT_2 * g);
    }
    let mut pair = n + 1;
    for k in 0..n {
        for l in (k + 1)..n {
            // photon + flip k  →  flips {k, l} absorbs the photon on l
            two.set(k + 1, pair, couplings[l]);
            two.set(l + 1, pair, couplings[k]);
            pair += 1;
        }
    }
    let e2 = eigenvalues(&two)?[0];
    Ok(SiteEnergies { e1, e2, u: e2 - 2.0 * e1 })
}

/// Homogeneous approximation: the couplings are replaced by their rms value
/// g_eff = √(Σ g_k² / N). Exact in the one-excitation sector.
pub fn site_energies_collective(
    detuning: f64,
    couplings: &[f64],
) -> Result<SiteEnergies, DisorderError> {
    let n = couplings.len();
    if n == 0 {
        return Ok(SiteEnergies::photon_only(detuning));
    }
    let g_eff = (couplings.iter().map(|g| g * g).sum::<f64>() / n as f64).sqrt();
    if g_eff == 0.0 {
        return Ok(SiteEnergies::uncoupled(detuning));
    }
    let model = ModelParams::new(n, 1, detuning / g_eff)?;
    let e1 = manifold_energy(&model, 1)? * g_eff;
    let e2 = manifold_energy(&model, 2)? * g_eff;
    Ok(SiteEnergies { e1, e2, u: e2 - 2.0 * e1 })
}

impl SiteEnergies {
    fn photon_only(detuning: f64) -> Self {
        Self {
            e1: detuning,
            e2: 2.0 * detuning,
            u: 0.0,
        }
    }

    fn uncoupled(detuning: f64) -> Self {
        let e1 = detuning.min(0.0);
        let e2 = (2.0 * detuning).min(detuning).min(0.0);
        Self { e1, e2, u: e2 - 2.0 * e1 }
    }
}
