//! Reference boundaries used to cross-check the variational solver.
//!
//! * the textbook mean-field Bose-Hubbard boundary, closed form in μ;
//! * the Landau-curvature boundary of the polariton model: expanding the
//!   ψ = 0 ground energy to second order in the drive −z t ψ (a + a†) gives
//!   E(ψ) ≈ E₀ + (z t − z² t² χ) ψ², with χ = Σ_m |⟨m|a + a†|0⟩|² / (E_m − E₀)
//!   over the neighbouring manifolds. The insulator becomes unstable where the
//!   bracket changes sign, t = 1 / (z χ).

use super::{MeanField, MeanFieldError};
use crate::eigen::eigen_decomposition;
use crate::model::manifold_block;
use crate::optimize::golden_section_max;
use crate::params::ModelParams;

/// Mean-field Bose-Hubbard boundary t(μ) of lobe `n` for on-site energy `u`:
/// z t = (u n − μ)(μ − u(n−1)) / ((n+1)(μ − u(n−1)) + n(u n − μ)).
pub fn bhm_boundary_oracle(u: f64, z: usize, n: usize, mu: f64) -> Result<f64, MeanFieldError> {
    if !(u > 0.0) || n == 0 || z == 0 {
        return Err(MeanFieldError::InvalidArgument(format!(
            "need u > 0, n ≥ 1, z ≥ 1 (got u = {u}, n = {n}, z = {z})"
        )));
    }
    let nf = n as f64;
    let below = mu - u * (nf - 1.0);
    let above = u * nf - mu;
    if !(below > 0.0 && above > 0.0) {
        return Err(MeanFieldError::MuOutsideLobe {
            n,
            mu,
            lower: u * (nf - 1.0),
            upper: u * nf,
        });
    }
    Ok(above * below / ((nf + 1.0) * below + nf * above) / z as f64)
}

/// Tip of Bose-Hubbard lobe `n`: μ = u(√(n(n+1)) − 1),
/// z t = u(2n + 1 − 2√(n(n+1))). Returns (μ_tip, t_tip).
pub fn bhm_lobe_tip(u: f64, z: usize, n: usize) -> (f64, f64) {
    let nf = n as f64;
    let root = (nf * (nf + 1.0)).sqrt();
    (u * (root - 1.0), u * (2.0 * nf + 1.0 - 2.0 * root) / z as f64)
}

/// Tunneling at which the ψ² coefficient of the ground energy vanishes.
pub fn curvature_boundary(model: &ModelParams, n: usize, mu: f64) -> Result<f64, MeanFieldError> {
    if n == 0 {
        return Err(MeanFieldError::InvalidArgument("lobe index starts at 1".into()));
    }
    let here = eigen_decomposition(&manifold_block(model, n).matrix)?;
    let ground = &here[0];
    let e0 = ground.value - n as f64 * mu;
    let mut chi = 0.0;
    for (m, raising) in [(n - 1, false), (n + 1, true)] {
        let states = eigen_decomposition(&manifold_block(model, m).matrix)?;
        let dim_m = states[0].vector.len();
        // a† (raising) or a (lowering) applied to the ground state, expressed
        // in manifold m's (n_ph = m − k, e = k) basis
        let mut image = vec![0.0; dim_m];
        for (k, c) in ground.vector.iter().enumerate() {
            let photons = n - k;
            if raising {
                if k < dim_m {
                    image[k] += ((photons + 1) as f64).sqrt() * c;
                }
            } else if photons >= 1 && k < dim_m {
                image[k] += (photons as f64).sqrt() * c;
            }
        }
        for s in &states {
            let amp: f64 = s.vector.iter().zip(&image).map(|(a, b)| a * b).sum();
            let gap = s.value - m as f64 * mu - e0;
            if gap <= 0.0 {
                return Err(MeanFieldError::MuOutsideLobe {
                    n,
                    mu,
                    lower: f64::NAN,
                    upper: f64::NAN,
                });
            }
            chi += amp * amp / gap;
        }
    }
    Ok(1.0 / (model.z as f64 * chi))
}

/// Lobe tip from the curvature boundary, by golden-section over μ.
pub fn curvature_critical(
    model: &ModelParams,
    n: usize,
    mu_tol: f64,
) -> Result<(f64, f64), MeanFieldError> {
    let lobe = MeanField::new(*model).mott_lobe_mu_range(n)?;
    if lobe.is_empty() {
        return Err(MeanFieldError::EmptyLobe { n });
    }
    let inset = 1e-9 * lobe.width();
    golden_section_max(
        |mu| curvature_boundary(model, n, mu),
        lobe.lower + inset,
        lobe.upper - inset,
        mu_tol,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optimize::golden_section_max;

    #[test]
    fn bhm_edges_and_tip() {
        let t = bhm_boundary_oracle(1.0, 4, 1, 1e-9).unwrap();
        assert!(t < 1e-8);
        let (mu_tip, t_tip) = bhm_lobe_tip(1.0, 4, 1);
        assert!((mu_tip - (2f64.sqrt() - 1.0)).abs() < 1e-15);
        assert!((4.0 * t_tip - (3.0 - 2.0 * 2f64.sqrt())).abs() < 1e-15);
        assert!((4.0 * t_tip - 0.171_572_875_253_8).abs() < 1e-12);
        assert!((1.0 / t_tip - 4.0 * (3.0 + 2.0 * 2f64.sqrt())).abs() < 1e-9);
    }

    #[test]
    fn bhm_tip_closed_form_matches_maximum() {
        for n in 1..5 {
            let u = 0.7;
            let (mu_c, t_c) = bhm_lobe_tip(u, 6, n);
            let (mu_g, t_g) = golden_section_max(
                |mu| bhm_boundary_oracle(u, 6, n, mu),
                u * (n as f64 - 1.0) + 1e-12,
                u * n as f64 - 1e-12,
                1e-10,
            )
            .unwrap();
            assert!((mu_c - mu_g).abs() < 1e-7);
            assert!((t_c - t_g).abs() < 1e-13);
        }
    }

    #[test]
    fn bhm_rejects_outside() {
        assert!(bhm_boundary_oracle(1.0, 4, 1, -0.1).is_err());
        assert!(bhm_boundary_oracle(1.0, 4, 1, 1.0).is_err());
        assert!(bhm_boundary_oracle(0.0, 4, 1, 0.5).is_err());
    }

    #[test]
    fn curvature_boundary_vanishes_at_edges() {
        let m = ModelParams::new(8, 4, 0.0).unwrap();
        let lobe = MeanField::new(m).mott_lobe_mu_range(1).unwrap();
        let edge = curvature_boundary(&m, 1, lobe.lower + 1e-9).unwrap();
        let mid = curvature_boundary(&m, 1, lobe.midpoint()).unwrap();
        assert!(edge < 1e-6 * mid);
    }
}
