//! Dispersive-limit Bose-Hubbard parameters from cavity mode profiles.
//!
//! With the mode normalized so that 2ε₀ ∫ K φ² = 1, the hopping is the
//! overlap t = 2ε₀ ∫ K(r) φ(r) φ(r − d) and the on-site interaction is
//! U = −6ε₀ ∫ χ³(r) φ⁴(r). Both come out in units of the single-cavity
//! self-energy.
//!
//! Quadrature is trapezoidal on the grid nodes. Each z-slice is summed in a
//! fixed order and the slice totals are added in index order, so the result
//! does not depend on how slices are scheduled.

mod field;
pub mod format;

pub use field::ScalarField3D;

use crate::params::EPSILON_0;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum KerrError {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("fields `{0}` and `{1}` are not on the same grid")]
    NotCongruent(&'static str, &'static str),
    #[error("mode has zero norm (∫ K φ² = {0})")]
    ZeroNorm(f64),
    #[error(transparent)]
    Format(#[from] format::FieldFormatError),
}

/// Dielectric constant and Kerr coefficient on the mode's grid.
#[derive(Debug, Clone)]
pub struct MaterialMaps {
    pub k_c: ScalarField3D,
    /// χ³ in m²/V².
    pub chi3: ScalarField3D,
}

impl MaterialMaps {
    pub fn new(k_c: ScalarField3D, chi3: ScalarField3D) -> Result<Self, KerrError> {
        if !k_c.is_congruent(&chi3) {
            return Err(KerrError::NotCongruent("k_c", "chi3"));
        }
        Ok(Self { k_c, chi3 })
    }

    /// Uniform dielectric and Kerr maps on the geometry of `like`.
    pub fn uniform(like: &ScalarField3D, k: f64, chi3: f64) -> Result<Self, KerrError> {
        Self::new(like.constant_like(k)?, like.constant_like(chi3)?)
    }

    pub fn coarsened(&self) -> Result<Self, KerrError> {
        Self::new(self.k_c.coarsened()?, self.chi3.coarsened()?)
    }
}

fn trapezoid_weight(i: usize, n: usize, h: f64) -> f64 {
    if n == 1 {
        h
    } else if i == 0 || i == n - 1 {
        0.5 * h
    } else {
        h
    }
}

/// Trapezoidal integral of `f(i, j, k)` over the nodes of a grid.
fn integrate(dims: [usize; 3], spacing: [f64; 3], f: impl Fn(usize, usize, usize) -> f64 + Sync) -> f64 {
    let [nx, ny, nz] = dims;
    let slices: Vec<f64> = (0..nz)
        .into_par_iter()
        .map(|k| {
            let mut slice = 0.0;
            for j in 0..ny {
                let mut row = 0.0;
                for i in 0..nx {
                    row += trapezoid_weight(i, nx, spacing[0]) * f(i, j, k);
                }
                slice += trapezoid_weight(j, ny, spacing[1]) * row;
            }
            slice * trapezoid_weight(k, nz, spacing[2])
        })
        .collect();
    slices.iter().sum()
}

/// Rescaled mode and the factor that was applied.
#[derive(Debug, Clone)]
pub struct NormalizedMode {
    pub phi: ScalarField3D,
    pub scale: f64,
}

/// Rescales φ so that 2ε₀ ∫ K φ² = 1.
pub fn normalize_mode(phi: &ScalarField3D, k_c: &ScalarField3D) -> Result<NormalizedMode, KerrError> {
    if !phi.is_congruent(k_c) {
        return Err(KerrError::NotCongruent("phi", "k_c"));
    }
    let norm = 2.0
        * EPSILON_0
        * integrate(phi.dims(), phi.spacing(), |i, j, k| {
            let p = phi.at(i, j, k);
            k_c.at(i, j, k) * p * p
        });
    if !(norm.is_finite() && norm > 0.0) {
        return Err(KerrError::ZeroNorm(norm));
    }
    let scale = 1.0 / norm.sqrt();
    Ok(NormalizedMode {
        phi: phi.scaled(scale),
        scale,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Hopping {
    pub t: f64,
    /// The displaced box misses the grid entirely; `t` is zero.
    pub outside_support: bool,
}

/// t = 2ε₀ ∫ K(r) φ(r) φ(r − d), with φ(r − d) sampled trilinearly.
pub fn hopping_integral(k_c: &ScalarField3D, phi: &ScalarField3D, d: [f64; 3]) -> Result<Hopping, KerrError> {
    if !phi.is_congruent(k_c) {
        return Err(KerrError::NotCongruent("phi", "k_c"));
    }
    let (lo, hi) = (phi.origin(), phi.upper());
    let outside = (0..3).any(|a| lo[a] + d[a] > hi[a] || hi[a] + d[a] < lo[a]);
    if outside {
        return Ok(Hopping { t: 0.0, outside_support: true });
    }
    let t = 2.0
        * EPSILON_0
        * integrate(phi.dims(), phi.spacing(), |i, j, k| {
            let p = phi.at(i, j, k);
            if p == 0.0 {
                return 0.0;
            }
            let r = phi.node_position(i, j, k);
            let shifted = phi.sample([r[0] - d[0], r[1] - d[1], r[2] - d[2]]);
            k_c.at(i, j, k) * p * shifted
        });
    Ok(Hopping { t, outside_support: false })
}

/// U = −6ε₀ ∫ χ³ φ⁴.
pub fn kerr_u(chi3: &ScalarField3D, phi: &ScalarField3D) -> Result<f64, KerrError> {
    if !phi.is_congruent(chi3) {
        return Err(KerrError::NotCongruent("phi", "chi3"));
    }
    Ok(-6.0
        * EPSILON_0
        * integrate(phi.dims(), phi.spacing(), |i, j, k| {
            let p2 = phi.at(i, j, k) * phi.at(i, j, k);
            chi3.at(i, j, k) * p2 * p2
        }))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EffectiveBhm {
    pub t: f64,
    pub u: f64,
    /// Factor applied to the input mode by the normalization.
    pub normalization: f64,
    pub outside_support: bool,
}

/// Normalizes the mode, then evaluates hopping at displacement `d` and U.
pub fn effective_bhm(maps: &MaterialMaps, phi: &ScalarField3D, d: [f64; 3]) -> Result<EffectiveBhm, KerrError> {
    let mode = normalize_mode(phi, &maps.k_c)?;
    let hop = hopping_integral(&maps.k_c, &mode.phi, d)?;
    let u = kerr_u(&maps.chi3, &mode.phi)?;
    Ok(EffectiveBhm {
        t: hop.t,
        u,
        normalization: mode.scale,
        outside_support: hop.outside_support,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KerrEstimate {
    pub fine: EffectiveBhm,
    /// Same evaluation on every second node.
    pub coarse: EffectiveBhm,
    /// |t_fine − t_coarse| and |U_fine − U_coarse|.
    pub t_error: f64,
    pub u_error: f64,
}

/// [`effective_bhm`] with a quadrature error estimate from a half-resolution
/// re-evaluation.
pub fn effective_bhm_with_error(
    maps: &MaterialMaps,
    phi: &ScalarField3D,
    d: [f64; 3],
) -> Result<KerrEstimate, KerrError> {
    let fine = effective_bhm(maps, phi, d)?;
    let coarse = effective_bhm(&maps.coarsened()?, &phi.coarsened()?, d)?;
    Ok(KerrEstimate {
        fine,
        coarse,
        t_error: (fine.t - coarse.t).abs(),
        u_error: (fine.u - coarse.u).abs(),
    })
}

/// Closed forms for φ = A exp(−r²/2σ²) in a uniform medium.
pub mod gaussian {
    use crate::params::EPSILON_0;
    use std::f64::consts::PI;

    /// Amplitude giving 2ε₀ K ∫ φ² = 1.
    pub fn amplitude(k: f64, sigma: f64) -> f64 {
        (2.0 * EPSILON_0 * k * PI.powf(1.5) * sigma.powi(3)).powf(-0.5)
    }

    pub fn hopping(k: f64, amplitude: f64, sigma: f64, d: f64) -> f64 {
        2.0 * EPSILON_0 * k * amplitude * amplitude * PI.powf(1.5) * sigma.powi(3) * (-d * d / (4.0 * sigma * sigma)).exp()
    }

    pub fn kerr_u(chi3: f64, amplitude: f64, sigma: f64) -> f64 {
        -6.0 * EPSILON_0 * chi3 * amplitude.powi(4) * (PI / 2.0).powf(1.5) * sigma.powi(3)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // σ = 1 µm, box ±6σ
    fn fixture(n: usize) -> (ScalarField3D, f64) {
        let sigma = 1e-6;
        let half = 6.0 * sigma;
        let h = 2.0 * half / (n - 1) as f64;
        let phi = ScalarField3D::from_fn([n; 3], [h; 3], [-half; 3], |[x, y, z]| {
            (-(x * x + y * y + z * z) / (2.0 * sigma * sigma)).exp()
        })
        .unwrap();
        (phi, h)
    }

    #[test]
    fn gaussian_normalization_amplitude() {
        let (phi, _) = fixture(49);
        let maps = MaterialMaps::uniform(&phi, 12.0, 0.0).unwrap();
        let mode = normalize_mode(&phi, &maps.k_c).unwrap();
        let a = gaussian::amplitude(12.0, 1e-6);
        assert!((mode.scale - a).abs() / a < 1e-6);
        let again = normalize_mode(&mode.phi, &maps.k_c).unwrap();
        assert!((again.scale - 1.0).abs() < 1e-12);
        let tripled = normalize_mode(&phi.scaled(3.0), &maps.k_c).unwrap();
        assert!((tripled.scale * 3.0 - mode.scale).abs() / mode.scale < 1e-12);
    }

    #[test]
    fn gaussian_hopping_and_u() {
        let (phi, h) = fixture(49);
        let chi3 = 2e-18;
        let maps = MaterialMaps::uniform(&phi, 12.0, chi3).unwrap();
        let d = 8.0 * h;
        let r = effective_bhm(&maps, &phi, [d, 0.0, 0.0]).unwrap();
        let a = r.normalization;
        let t_exact = gaussian::hopping(12.0, a, 1e-6, d);
        assert!((r.t - t_exact).abs() / t_exact < 1e-4, "{} vs {t_exact}", r.t);
        let u_exact = gaussian::kerr_u(chi3, a, 1e-6);
        assert!((r.u - u_exact).abs() / u_exact.abs() < 1e-4);
        assert!(r.u < 0.0);
        let self_overlap = effective_bhm(&maps, &phi, [0.0; 3]).unwrap().t;
        assert!((self_overlap - 1.0).abs() < 1e-12);
    }

    #[test]
    fn disjoint_support() {
        let (phi, _) = fixture(17);
        let maps = MaterialMaps::uniform(&phi, 1.0, 0.0).unwrap();
        let r = effective_bhm(&maps, &phi, [20e-6, 0.0, 0.0]).unwrap();
        assert!(r.outside_support);
        assert_eq!(r.t, 0.0);
        assert_eq!(r.u, 0.0);
    }

    #[test]
    fn incongruent_grids_rejected() {
        let (phi, _) = fixture(9);
        let (other, _) = fixture(11);
        assert!(matches!(normalize_mode(&phi, &other), Err(KerrError::NotCongruent(..))));
    }
}
