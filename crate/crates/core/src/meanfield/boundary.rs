//! Mott-lobe geometry: the zero-hopping μ range of each lobe, the tunneling at
//! which the order parameter switches on, and the lobe tip.

use super::{MeanField, MeanFieldError};
use crate::model::manifold_energy;
use crate::optimize::{bisect_predicate, golden_section_max};
use serde::Serialize;

/// μ interval (relative to ω_ex, units of g) of a Mott lobe at t = 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LobeRange {
    pub n: usize,
    pub lower: f64,
    pub upper: f64,
}

impl LobeRange {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn is_empty(&self) -> bool {
        self.lower >= self.upper
    }

    pub fn contains_strictly(&self, mu: f64) -> bool {
        mu > self.lower && mu < self.upper
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalPoint {
    pub n: usize,
    pub t_c: f64,
    pub mu_tip: f64,
}

impl MeanField {
    /// Lobe `n` spans [E(n) − E(n−1), E(n+1) − E(n)].
    pub fn mott_lobe_mu_range(&self, n: usize) -> Result<LobeRange, MeanFieldError> {
        if n == 0 {
            return Err(MeanFieldError::InvalidArgument(
                "lobe index starts at 1".into(),
            ));
        }
        let m = self.model();
        let below = manifold_energy(m, n - 1)?;
        let here = manifold_energy(m, n)?;
        let above = manifold_energy(m, n + 1)?;
        Ok(LobeRange {
            n,
            lower: here - below,
            upper: above - here,
        })
    }

    /// Smallest t at which ψ* exceeds the zero tolerance, by bisection on t.
    pub fn boundary_tunneling(&self, n: usize, mu: f64) -> Result<f64, MeanFieldError> {
        let lobe = self.mott_lobe_mu_range(n)?;
        if !lobe.contains_strictly(mu) {
            return Err(MeanFieldError::MuOutsideLobe {
                n,
                mu,
                lower: lobe.lower,
                upper: lobe.upper,
            });
        }
        if self.is_superfluid(0.0, mu)? {
            return Err(MeanFieldError::NotBracketed {
                mu,
                reason: "order parameter already finite at t = 0".into(),
            });
        }
        let z = self.model().z as f64;
        let mut lo = 0.0;
        let mut hi = lobe.width() / (4.0 * z);
        let mut doublings = 0;
        while !self.is_superfluid(hi, mu)? {
            lo = hi;
            hi *= 2.0;
            doublings += 1;
            if doublings > 60 {
                return Err(MeanFieldError::NotBracketed {
                    mu,
                    reason: format!("still insulating at t = {hi}"),
                });
            }
        }
        let rel = self.options().boundary_rel_tol;
        let (lo, hi) = bisect_predicate(
            |t| self.is_superfluid(t, mu),
            lo,
            hi,
            |_, hi| rel * hi,
            200,
        )?;
        Ok(0.5 * (lo + hi))
    }

    /// Lobe tip: the largest boundary tunneling over μ inside lobe `n`.
    pub fn critical_tunneling(&self, n: usize) -> Result<CriticalPoint, MeanFieldError> {
        let lobe = self.mott_lobe_mu_range(n)?;
        if lobe.is_empty() {
            return Err(MeanFieldError::EmptyLobe { n });
        }
        let inset = 1e-6 * lobe.width();
        let (mu_tip, t_c) = golden_section_max(
            |mu| self.boundary_tunneling(n, mu),
            lobe.lower + inset,
            lobe.upper - inset,
            self.options().tip_mu_tol,
        )?;
        Ok(CriticalPoint { n, t_c, mu_tip })
    }
}
