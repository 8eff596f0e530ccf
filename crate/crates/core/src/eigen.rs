//! Dense real-symmetric matrices and the lowest-eigenpair contract.

use nalgebra::DMatrix;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EigenError {
    #[error("eigensolver did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },
    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("matrix is empty")]
    Empty,
}

/// Dense real-symmetric matrix, row-major. Every off-diagonal write lands in
/// both triangles so `get(i, j) == get(j, i)` holds bit for bit.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl SymmetricMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    /// Builds from a closure evaluated on the lower triangle only.
    pub fn from_lower(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..=i {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.dim + j] = value;
        self.data[j * self.dim + i] = value;
    }

    #[inline]
    pub fn add(&mut self, i: usize, j: usize, value: f64) {
        let v = self.get(i, j) + value;
        self.set(i, j, v);
    }

    pub fn add_identity(&mut self, shift: f64) {
        for i in 0..self.dim {
            self.data[i * self.dim + i] += shift;
        }
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    /// Largest absolute row sum (the ∞-norm), used as the spectral scale.
    pub fn spectral_scale(&self) -> f64 {
        (0..self.dim)
            .map(|i| self.row(i).iter().map(|x| x.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        (0..self.dim)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    fn check_finite(&self) -> Result<(), EigenError> {
        if self.dim == 0 {
            return Err(EigenError::Empty);
        }
        for i in 0..self.dim {
            for j in 0..=i {
                if !self.get(i, j).is_finite() {
                    return Err(EigenError::NonFinite { row: i, col: j });
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Eigenpair {
    pub value: f64,
    pub vector: Vec<f64>,
}

/// Flips `v` so its largest-magnitude component is positive (first one wins
/// ties), making eigenvectors reproducible.
pub fn canonical_sign(v: &mut [f64]) {
    let mut best = 0usize;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = i;
        }
    }
    if v.get(best).is_some_and(|x| *x < 0.0) {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

pub(crate) fn normalize(v: &mut [f64]) -> f64 {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
    norm
}

const MAX_SWEEPS: usize = 10_000;

/// Ground state of a dense symmetric matrix.
///
/// Full symmetric QR decomposition (Householder tridiagonalization followed by
/// implicit shifted QR), then the smallest eigenvalue is picked.
pub fn lowest_eigenpair(m: &SymmetricMatrix) -> Result<Eigenpair, EigenError> {
    m.check_finite()?;
    let n = m.dim();
    if n == 1 {
        return Ok(Eigenpair {
            value: m.get(0, 0),
            vector: vec![1.0],
        });
    }
    let dense = DMatrix::from_row_slice(n, n, &m.data);
    let eig = dense
        .try_symmetric_eigen(f64::EPSILON, MAX_SWEEPS)
        .ok_or(EigenError::NoConvergence {
            iterations: MAX_SWEEPS,
        })?;
    let (idx, value) = eig
        .eigenvalues
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, v)| if v < acc.1 { (i, v) } else { acc });
    let mut vector: Vec<f64> = eig.eigenvectors.column(idx).iter().copied().collect();
    normalize(&mut vector);
    canonical_sign(&mut vector);
    Ok(Eigenpair { value, vector })
}

/// All eigenvalues in ascending order.
pub fn eigenvalues(m: &SymmetricMatrix) -> Result<Vec<f64>, EigenError> {
    m.check_finite()?;
    let n = m.dim();
    let dense = DMatrix::from_row_slice(n, n, &m.data);
    let eig = dense
        .try_symmetric_eigen(f64::EPSILON, MAX_SWEEPS)
        .ok_or(EigenError::NoConvergence {
            iterations: MAX_SWEEPS,
        })?;
    let mut values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// Full decomposition with eigenpairs sorted by ascending eigenvalue.
pub fn eigen_decomposition(m: &SymmetricMatrix) -> Result<Vec<Eigenpair>, EigenError> {
    m.check_finite()?;
    let n = m.dim();
    let dense = DMatrix::from_row_slice(n, n, &m.data);
    let eig = dense
        .try_symmetric_eigen(f64::EPSILON, MAX_SWEEPS)
        .ok_or(EigenError::NoConvergence {
            iterations: MAX_SWEEPS,
        })?;
    let mut pairs: Vec<Eigenpair> = (0..n)
        .map(|k| {
            let mut vector: Vec<f64> = eig.eigenvectors.column(k).iter().copied().collect();
            normalize(&mut vector);
            canonical_sign(&mut vector);
            Eigenpair {
                value: eig.eigenvalues[k],
                vector,
            }
        })
        .collect();
    pairs.sort_by(|a, b| a.value.total_cmp(&b.value));
    Ok(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn one_by_one() {
        let m = SymmetricMatrix::from_lower(1, |_, _| 3.25);
        let e = lowest_eigenpair(&m).unwrap();
        assert_eq!(e.value, 3.25);
        assert_eq!(e.vector, vec![1.0]);
    }

    #[test]
    fn two_by_two_off_diagonal() {
        let g = 1.7;
        let m = SymmetricMatrix::from_lower(2, |i, j| if i == j { 0.0 } else { g });
        let e = lowest_eigenpair(&m).unwrap();
        assert!((e.value + g).abs() < 1e-14);
        assert!((e.vector[0] - FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((e.vector[1] + FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn n2_manifold_for_eight_impurities() {
        // off-diagonals √16 and √14 on a zero diagonal
        let mut m = SymmetricMatrix::zeros(3);
        m.set(0, 1, 16f64.sqrt());
        m.set(1, 2, 14f64.sqrt());
        let e = lowest_eigenpair(&m).unwrap();
        assert!((e.value + 30f64.sqrt()).abs() < 1e-12);
        let norm: f64 = e.vector.iter().map(|x| x * x).sum();
        assert!((norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn symmetric_storage_is_exact() {
        let mut m = SymmetricMatrix::zeros(4);
        m.set(3, 1, 0.1 + 0.2);
        m.add(1, 3, 1e-17);
        assert_eq!(m.get(1, 3).to_bits(), m.get(3, 1).to_bits());
    }

    #[test]
    fn rejects_nan() {
        let mut m = SymmetricMatrix::zeros(2);
        m.set(1, 0, f64::NAN);
        assert_eq!(
            lowest_eigenpair(&m),
            Err(EigenError::NonFinite { row: 1, col: 0 })
        );
        assert_eq!(
            lowest_eigenpair(&SymmetricMatrix::zeros(0)),
            Err(EigenError::Empty)
        );
    }

    #[test]
    fn sign_convention() {
        let mut v = vec![0.1, -0.9, 0.3];
        canonical_sign(&mut v);
        assert_eq!(v, vec![-0.1, 0.9, -0.3]);
    }
}
