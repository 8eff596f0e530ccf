use super::{MeanField, MeanFieldError, ScanPoint};
use crate::params::ModelParams;
use rayon::prelude::*;
use std::fmt;
use thiserror::Error;

/// Order parameter and phase on a (t, μ) grid. Cells are stored μ-major:
/// `cells[i_mu * t_axis.len() + i_t]`.
#[derive(Debug, Clone)]
pub struct PhaseGrid {
    pub model: ModelParams,
    pub t_axis: Vec<f64>,
    pub mu_axis: Vec<f64>,
    pub cells: Vec<ScanPoint>,
}

impl PhaseGrid {
    pub fn cell(&self, i_t: usize, i_mu: usize) -> &ScanPoint {
        &self.cells[i_mu * self.t_axis.len() + i_t]
    }

    pub fn max_psi(&self) -> f64 {
        self.cells.iter().map(|c| c.psi_star).fold(0.0, f64::max)
    }

    pub fn max_cutoff(&self) -> usize {
        self.cells.iter().map(|c| c.n_max).max().unwrap_or(0)
    }

    /// Distinct Mott fillings present in the grid, ascending.
    pub fn fillings(&self) -> Vec<usize> {
        let mut f: Vec<usize> = self.cells.iter().filter_map(|c| c.phase.filling()).collect();
        f.sort_unstable();
        f.dedup();
        f
    }
}

#[derive(Debug, Clone, Error)]
pub struct PhaseGridError {
    /// (i_t, i_mu, error) for each failed cell.
    pub failures: Vec<(usize, usize, MeanFieldError)>,
}

impl fmt::Display for PhaseGridError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} grid cell(s) failed", self.failures.len())?;
        for (i_t, i_mu, e) in self.failures.iter().take(5) {
            write!(f, "; (t[{i_t}], mu[{i_mu}]): {e}")?;
        }
        Ok(())
    }
}

pub(crate) fn check_axis(name: &str, axis: &[f64]) -> Result<(), String> {
    if axis.is_empty() {
        return Err(format!("{name} axis is empty"));
    }
    if axis.iter().any(|x| !x.is_finite()) {
        return Err(format!("{name} axis has a non-finite value"));
    }
    if axis.windows(2).any(|w| w[1] <= w[0]) {
        return Err(format!("{name} axis is not strictly ascending"));
    }
    Ok(())
}

impl MeanField {
    /// Classifies every (t, μ) cell. Cells are independent and evaluated in
    /// parallel; the result does not depend on scheduling.
    pub fn phase_diagram(&self, t_axis: &[f64], mu_axis: &[f64]) -> Result<PhaseGrid, PhaseGridError> {
        let axis_err = |msg: String| PhaseGridError {
            failures: vec![(0, 0, MeanFieldError::InvalidArgument(msg))],
        };
        check_axis("t", t_axis).map_err(axis_err)?;
        check_axis("mu", mu_axis).map_err(axis_err)?;
        let nt = t_axis.len();
        let results: Vec<Result<ScanPoint, MeanFieldError>> = (0..nt * mu_axis.len())
            .into_par_iter()
            .map(|k| self.classify_phase(t_axis[k % nt], mu_axis[k / nt]))
            .collect();
        let mut cells = Vec::with_capacity(results.len());
        let mut failures = Vec::new();
        for (k, r) in results.into_iter().enumerate() {
            match r {
                Ok(c) => cells.push(c),
                Err(e) => failures.push((k % nt, k / nt, e)),
            }
        }
        if !failures.is_empty() {
            return Err(PhaseGridError { failures });
        }
        Ok(PhaseGrid {
            model: *self.model(),
            t_axis: t_axis.to_vec(),
            mu_axis: mu_axis.to_vec(),
            cells,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::meanfield::Phase;

    #[test]
    fn single_cell() {
        let mf = MeanField::new(ModelParams::new(8, 4, 0.0).unwrap());
        let g = mf.phase_diagram(&[0.0], &[-2.73]).unwrap();
        assert_eq!(g.cells.len(), 1);
        assert_eq!(g.cell(0, 0).phase, Phase::MottInsulator { filling: 1 });
    }

    #[test]
    fn rejects_bad_axes() {
        let mf = MeanField::new(ModelParams::new(2, 4, 0.0).unwrap());
        assert!(mf.phase_diagram(&[], &[0.0]).is_err());
        assert!(mf.phase_diagram(&[0.1, 0.0], &[0.0]).is_err());
        assert!(mf.phase_diagram(&[0.0], &[f64::NAN]).is_err());
    }
}
