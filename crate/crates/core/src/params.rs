//! Physical parameters of one lattice realization and their dimensionless form.
//!
//! Energies are angular frequencies (rad/s) with ħ = 1. The mean-field
//! machinery works in units of the photon-exciton coupling `g`, with the
//! chemical potential measured from the exciton line `ω_ex`; [`ModelParams`]
//! carries exactly the numbers that survive that scaling.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

/// Speed of light in vacuum (m/s).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Vacuum permittivity (F/m).
pub const EPSILON_0: f64 = 8.854_187_812_8e-12;

/// Emission wavelength of the Si donor-bound exciton (nm).
pub const DEFAULT_WAVELENGTH_NM: f64 = 817.0;

/// Refractive index of GaAs.
pub const DEFAULT_REFRACTIVE_INDEX: f64 = 3.6;

/// Photon-exciton coupling quoted in GHz.
pub const DEFAULT_G_GHZ: f64 = 33.3;

#[derive(Debug, Error, PartialEq)]
pub enum ParamError {
    #[error("impurity count must be at least 1 (got {0})")]
    ImpurityCount(usize),
    #[error("coordination number must be at least 1 (got {0})")]
    Coordination(usize),
    #[error("{name} must be positive and finite (got {value})")]
    NotPositive { name: &'static str, value: f64 },
    #[error("{name} must be finite (got {value})")]
    NotFinite { name: &'static str, value: f64 },
}

pub(crate) fn require_positive(name: &'static str, value: f64) -> Result<(), ParamError> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(ParamError::NotPositive { name, value })
    }
}

pub(crate) fn require_finite(name: &'static str, value: f64) -> Result<(), ParamError> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(ParamError::NotFinite { name, value })
    }
}

/// How a coupling quoted "in GHz" is turned into an angular frequency.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum FrequencyConvention {
    /// The number is an ordinary frequency ν; the angular value is 2πν.
    #[default]
    Ordinary,
    /// The number is already an angular frequency in units of 10⁹ rad/s.
    Angular,
}

impl FrequencyConvention {
    pub fn to_angular(self, ghz: f64) -> f64 {
        match self {
            FrequencyConvention::Ordinary => 2.0 * PI * ghz * 1e9,
            FrequencyConvention::Angular => ghz * 1e9,
        }
    }

    pub fn from_angular(self, omega: f64) -> f64 {
        match self {
            FrequencyConvention::Ordinary => omega / (2.0 * PI * 1e9),
            FrequencyConvention::Angular => omega / 1e9,
        }
    }
}

/// Physical constants of one lattice realization (all in rad/s).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    omega_ph: f64,
    omega_ex: f64,
    g: f64,
    big_n: usize,
    z: usize,
}

impl SystemParams {
    pub fn new(
        omega_ph: f64,
        omega_ex: f64,
        g: f64,
        big_n: usize,
        z: usize,
    ) -> Result<Self, ParamError> {
        require_positive("omega_ph", omega_ph)?;
        require_positive("omega_ex", omega_ex)?;
        require_positive("g", g)?;
        if big_n < 1 {
            return Err(ParamError::ImpurityCount(big_n));
        }
        if z < 1 {
            return Err(ParamError::Coordination(z));
        }
        Ok(Self {
            omega_ph,
            omega_ex,
            g,
            big_n,
            z,
        })
    }

    /// Parameters anchored on an exciton line at `wavelength_nm`, with the
    /// cavity detuned by `detuning_in_g` couplings.
    pub fn from_wavelength(
        wavelength_nm: f64,
        g: f64,
        detuning_in_g: f64,
        big_n: usize,
        z: usize,
    ) -> Result<Self, ParamError> {
        require_positive("wavelength_nm", wavelength_nm)?;
        require_finite("detuning", detuning_in_g)?;
        let omega_ex = 2.0 * PI * SPEED_OF_LIGHT / (wavelength_nm * 1e-9);
        Self::new(omega_ex + detuning_in_g * g, omega_ex, g, big_n, z)
    }

    /// 817 nm exciton line, g = 2π × 33.3 GHz, z = 4.
    pub fn reference_defaults(big_n: usize, detuning_in_g: f64) -> Result<Self, ParamError> {
        Self::from_wavelength(
            DEFAULT_WAVELENGTH_NM,
            FrequencyConvention::Ordinary.to_angular(DEFAULT_G_GHZ),
            detuning_in_g,
            big_n,
            4,
        )
    }

    pub fn omega_ph(&self) -> f64 {
        self.omega_ph
    }

    pub fn omega_ex(&self) -> f64 {
        self.omega_ex
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn big_n(&self) -> usize {
        self.big_n
    }

    pub fn z(&self) -> usize {
        self.z
    }

    /// Δ = ω_ph − ω_ex, always recomputed from the two resonances.
    pub fn detuning(&self) -> f64 {
        self.omega_ph - self.omega_ex
    }

    pub fn with_big_n(&self, big_n: usize) -> Result<Self, ParamError> {
        Self::new(self.omega_ph, self.omega_ex, self.g, big_n, self.z)
    }

    pub fn with_omega_ph(&self, omega_ph: f64) -> Result<Self, ParamError> {
        Self::new(omega_ph, self.omega_ex, self.g, self.big_n, self.z)
    }

    /// The dimensionless model in units of g.
    pub fn model(&self) -> ModelParams {
        ModelParams {
            big_n: self.big_n,
            z: self.z,
            detuning: self.detuning() / self.g,
        }
    }
}

/// Single-site model in units of g with μ measured from ω_ex.
///
/// In those units the grand-canonical site Hamiltonian only depends on the
/// impurity count, the coordination number and the detuning.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub big_n: usize,
    pub z: usize,
    /// Δ/g.
    pub detuning: f64,
}

impl ModelParams {
    pub fn new(big_n: usize, z: usize, detuning: f64) -> Result<Self, ParamError> {
        if big_n < 1 {
            return Err(ParamError::ImpurityCount(big_n));
        }
        if z < 1 {
            return Err(ParamError::Coordination(z));
        }
        require_finite("detuning", detuning)?;
        Ok(Self { big_n, z, detuning })
    }

    pub fn with_big_n(self, big_n: usize) -> Result<Self, ParamError> {
        Self::new(big_n, self.z, self.detuning)
    }

    pub fn with_detuning(self, detuning: f64) -> Result<Self, ParamError> {
        Self::new(self.big_n, self.z, detuning)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn detuning_tracks_resonances() {
        let p = SystemParams::new(10.0, 7.5, 1.0, 3, 4).unwrap();
        assert_eq!(p.detuning(), 2.5);
        let q = p.with_omega_ph(7.0).unwrap();
        assert_eq!(q.detuning(), -0.5);
        assert_eq!(q.model().detuning, -0.5);
    }

    #[test]
    fn rejects_invalid() {
        assert_eq!(
            SystemParams::new(1.0, 1.0, 1.0, 0, 4),
            Err(ParamError::ImpurityCount(0))
        );
        assert!(SystemParams::new(1.0, 1.0, 0.0, 1, 4).is_err());
        assert!(SystemParams::new(1.0, -1.0, 1.0, 1, 4).is_err());
        assert!(SystemParams::new(1.0, 1.0, 1.0, 1, 0).is_err());
        assert!(ModelParams::new(1, 4, f64::NAN).is_err());
    }

    #[test]
    fn reference_defaults_scale() {
        let p = SystemParams::reference_defaults(8, 0.0).unwrap();
        assert!((p.omega_ex() - 2.3056e15).abs() / 2.3056e15 < 1e-4);
        assert!((p.g() - 2.0 * PI * 33.3e9).abs() < 1.0);
        assert_eq!(p.model(), ModelParams::new(8, 4, 0.0).unwrap());
        let blue = SystemParams::reference_defaults(3, 12.0).unwrap();
        assert!((blue.model().detuning - 12.0).abs() < 1e-9);
    }

    #[test]
    fn convention_round_trip() {
        for c in [FrequencyConvention::Ordinary, FrequencyConvention::Angular] {
            let w = c.to_angular(33.3);
            assert!((c.from_angular(w) - 33.3).abs() < 1e-12);
        }
    }
}
