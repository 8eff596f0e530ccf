//! Banded symmetric matrices and a lowest-eigenpair solver for them.
//!
//! The single-site Hamiltonian is block tridiagonal in total excitation
//! number; ordered by excitation its bandwidth is about the photon cutoff, far
//! below the dimension. The solver brackets the ground energy by bisection on
//! the shift using banded Cholesky as a positive-definiteness test (A − σ is
//! positive definite exactly when σ is below the spectrum), then polishes the
//! eigenvector by inverse iteration at the lower bracket and reports its
//! Rayleigh quotient.

use crate::eigen::{canonical_sign, normalize, EigenError, Eigenpair};

#[derive(Debug, Clone, PartialEq)]
pub struct BandedSymmetric {
    dim: usize,
    bandwidth: usize,
    // row i holds columns i-bandwidth..=i, left-padded with zeros
    lower: Vec<f64>,
}

impl BandedSymmetric {
    pub fn zeros(dim: usize, bandwidth: usize) -> Self {
        Self {
            dim,
            bandwidth,
            lower: vec![0.0; dim * (bandwidth + 1)],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bandwidth(&self) -> usize {
        self.bandwidth
    }

    #[inline]
    fn slot(&self, i: usize, j: usize) -> usize {
        let (r, c) = if i >= j { (i, j) } else { (j, i) };
        debug_assert!(r - c <= self.bandwidth, "entry outside band");
        r * (self.bandwidth + 1) + (c + self.bandwidth - r)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (r, c) = if i >= j { (i, j) } else { (j, i) };
        if r - c > self.bandwidth {
            0.0
        } else {
            self.lower[self.slot(r, c)]
        }
    }

    /// Adds to (i, j) and implicitly (j, i). Panics outside the band.
    #[inline]
    pub fn add(&mut self, i: usize, j: usize, value: f64) {
        let (r, c) = if i >= j { (i, j) } else { (j, i) };
        assert!(r - c <= self.bandwidth, "entry ({i}, {j}) outside band");
        let s = self.slot(r, c);
        self.lower[s] += value;
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        let w = self.bandwidth;
        for i in 0..self.dim {
            let row = &self.lower[i * (w + 1)..(i + 1) * (w + 1)];
            let j0 = i.saturating_sub(w);
            for j in j0..i {
                let a = row[j + w - i];
                out[i] += a * v[j];
                out[j] += a * v[i];
            }
            out[i] += row[w] * v[i];
        }
        out
    }

    fn gershgorin(&self) -> (f64, f64, f64) {
        let mut radius = vec![0.0; self.dim];
        let w = self.bandwidth;
        for i in 0..self.dim {
            for j in i.saturating_sub(w)..i {
                let a = self.get(i, j).abs();
                radius[i] += a;
                radius[j] += a;
            }
        }
        let mut lo = f64::INFINITY;
        let mut min_diag = f64::INFINITY;
        let mut scale: f64 = 0.0;
        for i in 0..self.dim {
            let d = self.get(i, i);
            lo = lo.min(d - radius[i]);
            min_diag = min_diag.min(d);
            scale = scale.max(d.abs() + radius[i]);
        }
        (lo, min_diag, scale.max(f64::MIN_POSITIVE))
    }

    /// Cholesky factor of `self - shift·I` in the same banded layout, or
    /// `None` when the shifted matrix is not positive definite.
    pub fn shifted_cholesky(&self, shift: f64) -> Option<BandCholesky> {
        let n = self.dim;
        let w = self.bandwidth;
        let mut l = vec![0.0; n * (w + 1)];
        for j in 0..n {
            let jrow = j * (w + 1);
            let k0 = j.saturating_sub(w);
            let mut s = self.lower[jrow + w] - shift;
            for k in k0..j {
                let v = l[jrow + k + w - j];
                s -= v * v;
            }
            if !(s > 0.0) {
                return None;
            }
            let d = s.sqrt();
            l[jrow + w] = d;
            for i in (j + 1)..n.min(j + w + 1) {
                let irow = i * (w + 1);
                let mut s = self.lower[irow + j + w - i];
                for k in i.saturating_sub(w)..j {
                    s -= l[irow + k + w - i] * l[jrow + k + w - j];
                }
                l[irow + j + w - i] = s / d;
            }
        }
        Some(BandCholesky {
            dim: n,
            bandwidth: w,
            factor: l,
        })
    }

    /// Lowest eigenvalue and its unit eigenvector.
    pub fn lowest_eigenpair(&self) -> Result<Eigenpair, EigenError> {
        let n = self.dim;
        if n == 0 {
            return Err(EigenError::Empty);
        }
        for (k, x) in self.lower.iter().enumerate() {
            if !x.is_finite() {
                let i = k / (self.bandwidth + 1);
                let j = (k % (self.bandwidth + 1) + i).saturating_sub(self.bandwidth);
                return Err(EigenError::NonFinite { row: i, col: j });
            }
        }
        if n == 1 {
            return Ok(Eigenpair {
                value: self.get(0, 0),
                vector: vec![1.0],
            });
        }
        let (g_lo, mut hi, scale) = self.gershgorin();
        // A - lo is diagonally dominant; nudge it strictly positive definite.
        let mut lo = g_lo - 1e-12 * scale;
        let mut factor = match self.shifted_cholesky(lo) {
            Some(f) => f,
            None => {
                lo = g_lo - 1e-6 * scale - 1.0;
                self.shifted_cholesky(lo)
                    .ok_or(EigenError::NoConvergence { iterations: 0 })?
            }
        };
        let bracket_tol = 1e-10 * scale;
        let mut iterations = 0usize;
        while hi - lo > bracket_tol && iterations < 200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            match self.shifted_cholesky(mid) {
                Some(f) => {
                    lo = mid;
                    factor = f;
                }
                None => hi = mid,
            }
            iterations += 1;
        }

        let mut v: Vec<f64> = (0..n)
            .map(|i| ((i as f64 + 1.0) * 0.618_033_988_749_894_9).fract() + 0.5)
            .collect();
        normalize(&mut v);
        let residual_tol = 1e-13 * scale;
        let mut rayleigh = f64::NAN;
        for step in 0..400 {
            factor.solve_in_place(&mut v);
            if normalize(&mut v) == 0.0 || !v[0].is_finite() {
                return Err(EigenError::NoConvergence {
                    iterations: iterations + step,
                });
            }
            let av = self.mul_vec(&v);
            rayleigh = v.iter().zip(&av).map(|(a, b)| a * b).sum();
            let res: f64 = av
                .iter()
                .zip(&v)
                .map(|(a, b)| (a - rayleigh * b).powi(2))
                .sum::<f64>()
                .sqrt();
            if res <= residual_tol {
                canonical_sign(&mut v);
                return Ok(Eigenpair {
                    value: rayleigh,
                    vector: v,
                });
            }
        }
        // Near-degenerate ground states converge slowly in the vector but the
        // Rayleigh quotient is still bracketed; accept it if it is.
        if rayleigh.is_finite() && rayleigh >= lo - bracket_tol && rayleigh <= hi + bracket_tol {
            canonical_sign(&mut v);
            return Ok(Eigenpair {
                value: rayleigh,
                vector: v,
            });
        }
        Err(EigenError::NoConvergence {
            iterations: iterations + 400,
        })
    }
}

/// Banded lower Cholesky factor.
#[derive(Debug, Clone)]
pub struct BandCholesky {
    dim: usize,
    bandwidth: usize,
    factor: Vec<f64>,
}

impl BandCholesky {
    /// Solves (L Lᵀ) x = b in place.
    pub fn solve_in_place(&self, b: &mut [f64]) {
        let n = self.dim;
        let w = self.bandwidth;
        for i in 0..n {
            let row = &self.factor[i * (w + 1)..(i + 1) * (w + 1)];
            let mut s = b[i];
            for k in i.saturating_sub(w)..i {
                s -= row[k + w - i] * b[k];
            }
            b[i] = s / row[w];
        }
        for i in (0..n).rev() {
            let d = self.factor[i * (w + 1) + w];
            b[i] /= d;
            let xi = b[i];
            let row = &self.factor[i * (w + 1)..(i + 1) * (w + 1)];
            for k in i.saturating_sub(w)..i {
                b[k] -= row[k + w - i] * xi;
            }
        }
    }
}
