//! Truncated photon ⊗ collective-spin basis and the mean-field site Hamiltonian.
//!
//! A basis state `(n_ph, e)` has `n_ph` cavity photons and `e` excited
//! impurities in the fully symmetric Dicke ladder (total spin N/2, L_z = e − N/2).
//! With ħ = 1, energies in units of g and μ measured from ω_ex, the site
//! Hamiltonian reads
//!
//! ```text
//! H = n_ph·Δ − μ·(n_ph + e) + z t ψ²
//!     + g (L₋ a† + L₊ a) − z t ψ (a† + a)
//! ```
//!
//! The coupling term conserves the excitation number `n_ph + e`, so at ψ = 0
//! the Hamiltonian splits into manifold blocks of dimension min(n, N) + 1.

use crate::band::BandedSymmetric;
use crate::eigen::{self, EigenError, Eigenpair, SymmetricMatrix};
use crate::params::ModelParams;
use serde::Serialize;
use thiserror::Error;

/// Default cap on the basis dimension, (n_max + 1)(N + 1).
pub const DEFAULT_DIMENSION_BUDGET: usize = 20_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("basis dimension {dim} exceeds the budget of {budget} states")]
    DimensionBudget { dim: usize, budget: usize },
    #[error("impurity count must be at least 1")]
    NoImpurities,
    #[error("basis built for N = {basis} but parameters have N = {params}")]
    DimensionMismatch { basis: usize, params: usize },
    #[error("{name} must be finite and non-negative (got {value})")]
    BadArgument { name: &'static str, value: f64 },
    #[error(transparent)]
    Eigen(#[from] EigenError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct BasisState {
    pub n_ph: usize,
    pub e: usize,
}

/// Product basis ordered lexicographically in `(n_ph, e)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockDickeBasis {
    n_max: usize,
    big_n: usize,
}

impl FockDickeBasis {
    pub fn new(n_max: usize, big_n: usize) -> Result<Self, ModelError> {
        Self::with_budget(n_max, big_n, DEFAULT_DIMENSION_BUDGET)
    }

    pub fn with_budget(n_max: usize, big_n: usize, budget: usize) -> Result<Self, ModelError> {
        if big_n < 1 {
            return Err(ModelError::NoImpurities);
        }
        let dim = (n_max + 1)
            .checked_mul(big_n + 1)
            .unwrap_or(usize::MAX);
        if dim > budget {
            return Err(ModelError::DimensionBudget { dim, budget });
        }
        Ok(Self { n_max, big_n })
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn big_n(&self) -> usize {
        self.big_n
    }

    pub fn len(&self) -> usize {
        (self.n_max + 1) * (self.big_n + 1)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn index(&self, s: BasisState) -> usize {
        s.n_ph * (self.big_n + 1) + s.e
    }

    #[inline]
    pub fn state(&self, index: usize) -> BasisState {
        BasisState {
            n_ph: index / (self.big_n + 1),
            e: index % (self.big_n + 1),
        }
    }

    pub fn states(&self) -> impl Iterator<Item = BasisState> + '_ {
        (0..self.len()).map(|i| self.state(i))
    }
}

pub fn build_basis(n_max: usize, big_n: usize) -> Result<FockDickeBasis, ModelError> {
    FockDickeBasis::new(n_max, big_n)
}

/// Matrix element ⟨n_ph, e| L₋ a† |n_ph − 1, e + 1⟩ / g style amplitude for the
/// exchange between (n_ph + 1, e − 1) and (n_ph, e): √(n_ph+1)·√((N−e+1)·e).
#[inline]
fn exchange_amplitude(big_n: usize, n_ph: usize, e: usize) -> f64 {
    ((n_ph + 1) as f64).sqrt() * (((big_n + 1 - e) * e) as f64).sqrt()
}

fn check_args(t: f64, mu: f64, psi: f64) -> Result<(), ModelError> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(ModelError::BadArgument { name: "t", value: t });
    }
    if !mu.is_finite() {
        return Err(ModelError::BadArgument { name: "mu", value: mu });
    }
    if !psi.is_finite() {
        return Err(ModelError::BadArgument { name: "psi", value: psi });
    }
    Ok(())
}

/// Dense site Hamiltonian in the lexicographic basis order.
pub fn build_site_hamiltonian(
    params: &ModelParams,
    basis: &FockDickeBasis,
    t: f64,
    mu: f64,
    psi: f64,
) -> Result<SymmetricMatrix, ModelError> {
    if basis.big_n() != params.big_n {
        return Err(ModelError::DimensionMismatch {
            basis: basis.big_n(),
            params: params.big_n,
        });
    }
    check_args(t, mu, psi)?;
    let n = params.big_n;
    let zt = params.z as f64 * t;
    let mut h = SymmetricMatrix::zeros(basis.len());
    for s in basis.states() {
        let i = basis.index(s);
        h.set(
            i,
            i,
            s.n_ph as f64 * params.detuning - mu * (s.n_ph + s.e) as f64 + zt * psi * psi,
        );
        if s.e >= 1 && s.n_ph < basis.n_max() {
            let j = basis.index(BasisState {
                n_ph: s.n_ph + 1,
                e: s.e - 1,
            });
            h.set(i, j, exchange_amplitude(n, s.n_ph, s.e));
        }
        if s.n_ph < basis.n_max() {
            let j = basis.index(BasisState {
                n_ph: s.n_ph + 1,
                e: s.e,
            });
            h.set(i, j, -zt * psi * ((s.n_ph + 1) as f64).sqrt());
        }
    }
    Ok(h)
}

/// Lowest eigenpair of a dense symmetric matrix.
pub fn lowest_eigenpair(m: &SymmetricMatrix) -> Result<Eigenpair, EigenError> {
    eigen::lowest_eigenpair(m)
}

/// The site Hamiltonian split into its ψ-independent part and the unit drive,
/// stored in excitation order `(n_ph + e, e)` so it assembles into a narrow band.
#[derive(Debug, Clone)]
pub struct SiteOperator {
    basis: FockDickeBasis,
    // position in the banded ordering of each lexicographic basis index
    perm: Vec<usize>,
    bandwidth: usize,
    base: BandedSymmetric,
    // (row, col, √(n_ph + 1)) for each a† link, banded indices
    drive: Vec<(usize, usize, f64)>,
    z: f64,
}

impl SiteOperator {
    pub fn new(params: &ModelParams, n_max: usize, mu: f64) -> Result<Self, ModelError> {
        Self::with_basis(params, FockDickeBasis::new(n_max, params.big_n)?, mu)
    }

    pub fn with_basis(
        params: &ModelParams,
        basis: FockDickeBasis,
        mu: f64,
    ) -> Result<Self, ModelError> {
        if basis.big_n() != params.big_n {
            return Err(ModelError::DimensionMismatch {
                basis: basis.big_n(),
                params: params.big_n,
            });
        }
        check_args(0.0, mu, 0.0)?;
        let n = params.big_n;
        let n_max = basis.n_max();
        let mut order: Vec<usize> = (0..basis.len()).collect();
        order.sort_by_key(|&i| {
            let s = basis.state(i);
            (s.n_ph + s.e, s.e)
        });
        let mut perm = vec![0; basis.len()];
        for (pos, &i) in order.iter().enumerate() {
            perm[i] = pos;
        }

        let mut links = Vec::new();
        let mut drive = Vec::new();
        let mut bandwidth = 0;
        for s in basis.states() {
            let i = perm[basis.index(s)];
            if s.e >= 1 && s.n_ph < n_max {
                let j = perm[basis.index(BasisState {
                    n_ph: s.n_ph + 1,
                    e: s.e - 1,
                })];
                bandwidth = bandwidth.max(i.abs_diff(j));
                links.push((i, j, exchange_amplitude(n, s.n_ph, s.e)));
            }
            if s.n_ph < n_max {
                let j = perm[basis.index(BasisState {
                    n_ph: s.n_ph + 1,
                    e: s.e,
                })];
                bandwidth = bandwidth.max(i.abs_diff(j));
                drive.push((i, j, ((s.n_ph + 1) as f64).sqrt()));
            }
        }
        let mut base = BandedSymmetric::zeros(basis.len(), bandwidth);
        for s in basis.states() {
            let i = perm[basis.index(s)];
            base.add(
                i,
                i,
                s.n_ph as f64 * params.detuning - mu * (s.n_ph + s.e) as f64,
            );
        }
        for (i, j, a) in links {
            base.add(i, j, a);
        }
        Ok(Self {
            basis,
            perm,
            bandwidth,
            base,
            drive,
            z: params.z as f64,
        })
    }

    pub fn basis(&self) -> &FockDickeBasis {
        &self.basis
    }

    pub fn bandwidth(&self) -> usize {
        self.bandwidth
    }

    /// Banded matrix at (t, ψ), without the constant z t ψ².
    pub fn banded(&self, t: f64, psi: f64) -> BandedSymmetric {
        let mut m = self.base.clone();
        let amp = -self.z * t * psi;
        if amp != 0.0 {
            for &(i, j, a) in &self.drive {
                m.add(i, j, amp * a);
            }
        }
        m
    }

    /// Ground state at (t, ψ); the vector is returned in lexicographic order.
    pub fn ground_state(&self, t: f64, psi: f64) -> Result<Eigenpair, ModelError> {
        check_args(t, 0.0, psi)?;
        let mut pair = self.banded(t, psi).lowest_eigenpair()?;
        pair.value += self.z * t * psi * psi;
        let banded = std::mem::take(&mut pair.vector);
        pair.vector = self.perm.iter().map(|&p| banded[p]).collect();
        Ok(pair)
    }

    pub fn ground_energy(&self, t: f64, psi: f64) -> Result<f64, ModelError> {
        check_args(t, 0.0, psi)?;
        let pair = self.banded(t, psi).lowest_eigenpair()?;
        Ok(pair.value + self.z * t * psi * psi)
    }
}

/// One excitation manifold at ψ = 0: states with n − k photons and k excited
/// impurities, k = 0..=min(n, N). Energies are relative to n·ω_ex.
#[derive(Debug, Clone, PartialEq)]
pub struct ManifoldBlock {
    pub n: usize,
    pub matrix: SymmetricMatrix,
}

impl ManifoldBlock {
    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }
}

pub fn manifold_block(params: &ModelParams, n: usize) -> ManifoldBlock {
    let big_n = params.big_n;
    let dim = n.min(big_n) + 1;
    let mut m = SymmetricMatrix::zeros(dim);
    for k in 0..dim {
        m.set(k, k, (n - k) as f64 * params.detuning);
        if k + 1 < dim {
            let amp = ((n - k) as f64).sqrt() * (((big_n - k) * (k + 1)) as f64).sqrt();
            m.set(k, k + 1, amp);
        }
    }
    ManifoldBlock { n, matrix: m }
}

/// Lowest energy of manifold `n`, relative to n·ω_ex, in units of g.
pub fn manifold_energy(params: &ModelParams, n: usize) -> Result<f64, EigenError> {
    if n == 0 {
        return Ok(0.0);
    }
    Ok(eigen::lowest_eigenpair(&manifold_block(params, n).matrix)?.value)
}

/// Full spectrum of manifold `n`, ascending.
pub fn manifold_spectrum(params: &ModelParams, n: usize) -> Result<Vec<f64>, EigenError> {
    eigen::eigenvalues(&manifold_block(params, n).matrix)
}

/// Filling of the ψ = 0 ground state at chemical potential `mu`: the manifold
/// minimizing E(n) − nμ over 0..=n_limit. Ties go to the lower filling.
pub fn zero_hopping_filling(
    params: &ModelParams,
    mu: f64,
    n_limit: usize,
) -> Result<(usize, f64), EigenError> {
    let mut best = (0usize, 0.0f64);
    for n in 1..=n_limit {
        let e = manifold_energy(params, n)? - n as f64 * mu;
        if e < best.1 {
            best = (n, e);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(big_n: usize, detuning: f64) -> ModelParams {
        ModelParams::new(big_n, 4, detuning).unwrap()
    }

    #[test]
    fn basis_sizes_and_order() {
        let b = build_basis(0, 1).unwrap();
        let states: Vec<_> = b.states().map(|s| (s.n_ph, s.e)).collect();
        assert_eq!(states, vec![(0, 0), (0, 1)]);
        assert_eq!(build_basis(8, 8).unwrap().len(), 81);
        assert_eq!(build_basis(10, 50).unwrap().len(), 561);
        let b = build_basis(3, 2).unwrap();
        for (i, s) in b.states().enumerate() {
            assert_eq!(b.index(s), i);
        }
        assert!(matches!(
            FockDickeBasis::with_budget(100, 100, 1000),
            Err(ModelError::DimensionBudget { dim: 10201, .. })
        ));
        assert_eq!(build_basis(2, 0), Err(ModelError::NoImpurities));
    }

    #[test]
    fn single_impurity_polariton_doublet() {
        // μ = −ω puts both single-excitation diagonals at ω
        let omega = 5.0;
        let p = model(1, 0.0);
        let b = build_basis(1, 1).unwrap();
        let h = build_site_hamiltonian(&p, &b, 0.0, -omega, 0.0).unwrap();
        let i = b.index(BasisState { n_ph: 1, e: 0 });
        let j = b.index(BasisState { n_ph: 0, e: 1 });
        assert_eq!(h.get(i, i), omega);
        assert_eq!(h.get(j, j), omega);
        assert_eq!(h.get(i, j), 1.0);
        let mut block = SymmetricMatrix::zeros(2);
        block.set(0, 0, h.get(i, i));
        block.set(1, 1, h.get(j, j));
        block.set(0, 1, h.get(i, j));
        let vals = eigen::eigenvalues(&block).unwrap();
        assert!((vals[0] - (omega - 1.0)).abs() < 1e-12);
        assert!((vals[1] - (omega + 1.0)).abs() < 1e-12);
    }

    #[test]
    fn dicke_ladder_amplitude() {
        let p = model(8, 0.0);
        let b = build_basis(3, 8).unwrap();
        let h = build_site_hamiltonian(&p, &b, 0.0, 0.0, 0.0).unwrap();
        let i = b.index(BasisState { n_ph: 1, e: 0 });
        let j = b.index(BasisState { n_ph: 0, e: 1 });
        assert!((h.get(i, j) - 8f64.sqrt()).abs() < 1e-15);
        assert!((h.get(i, j) - 2.8284271247).abs() < 1e-9);
    }

    #[test]
    fn no_drive_conserves_excitations() {
        let p = model(3, 0.7);
        let b = build_basis(4, 3).unwrap();
        let h = build_site_hamiltonian(&p, &b, 0.3, -1.0, 0.0).unwrap();
        for a in b.states() {
            for c in b.states() {
                if a.n_ph + a.e != c.n_ph + c.e {
                    assert_eq!(h.get(b.index(a), b.index(c)), 0.0);
                }
            }
        }
    }

    #[test]
    fn drive_and_penalty() {
        let p = model(2, 0.0);
        let b = build_basis(2, 2).unwrap();
        let (t, psi) = (0.1, 0.5);
        let h = build_site_hamiltonian(&p, &b, t, 0.0, psi).unwrap();
        let i = b.index(BasisState { n_ph: 1, e: 1 });
        let j = b.index(BasisState { n_ph: 2, e: 1 });
        assert!((h.get(i, j) + 4.0 * t * psi * 2f64.sqrt()).abs() < 1e-15);
        assert!((h.get(0, 0) - 4.0 * t * psi * psi).abs() < 1e-15);
    }

    #[test]
    fn rejects_mismatch() {
        let p = model(2, 0.0);
        let b = build_basis(2, 3).unwrap();
        assert_eq!(
            build_site_hamiltonian(&p, &b, 0.0, 0.0, 0.0),
            Err(ModelError::DimensionMismatch { basis: 3, params: 2 })
        );
        let b = build_basis(2, 2).unwrap();
        assert!(build_site_hamiltonian(&p, &b, -1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn banded_operator_matches_dense() {
        for (big_n, n_max, det, t, mu, psi) in [
            (1, 5, 0.0, 0.05, -1.0, 0.4),
            (8, 7, 0.0, 0.02, -2.73, 0.3),
            (3, 6, 12.0, 0.3, 0.1, 0.7),
            (5, 4, -2.0, 0.0, -0.5, 0.0),
        ] {
            let p = model(big_n, det);
            let b = build_basis(n_max, big_n).unwrap();
            let dense = lowest_eigenpair(&build_site_hamiltonian(&p, &b, t, mu, psi).unwrap())
                .unwrap();
            let op = SiteOperator::new(&p, n_max, mu).unwrap();
            let banded = op.ground_state(t, psi).unwrap();
            assert!((dense.value - banded.value).abs() < 1e-11, "N={big_n}");
            let overlap: f64 = dense
                .vector
                .iter()
                .zip(&banded.vector)
                .map(|(a, b)| a * b)
                .sum();
            assert!((overlap.abs() - 1.0).abs() < 1e-8);
            assert!(op.bandwidth() <= n_max + 2);
        }
    }

    #[test]
    fn manifold_blocks() {
        let p = model(8, 0.0);
        assert_eq!(manifold_block(&p, 0).matrix, SymmetricMatrix::zeros(1));
        let b1 = manifold_block(&p, 1);
        assert_eq!(b1.dim(), 2);
        assert!((b1.matrix.get(0, 1) - 8f64.sqrt()).abs() < 1e-15);
        let b2 = manifold_block(&p, 2);
        assert!((b2.matrix.get(0, 1) - 4.0).abs() < 1e-15);
        assert!((b2.matrix.get(1, 2) - 14f64.sqrt()).abs() < 1e-15);
        for n in 0..20 {
            assert_eq!(manifold_block(&p, n).dim(), n.min(8) + 1);
        }
        let detuned = manifold_block(&model(3, 1.5), 2);
        assert_eq!(detuned.matrix.get(0, 0), 3.0);
        assert_eq!(detuned.matrix.get(2, 2), 0.0);
    }

    #[test]
    fn manifold_energies() {
        let p = model(8, 0.0);
        assert_eq!(manifold_energy(&p, 0).unwrap(), 0.0);
        assert!((manifold_energy(&p, 1).unwrap() + 2.82842712474619).abs() < 1e-12);
        assert!((manifold_energy(&p, 2).unwrap() + 30f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn filling_at_zero_hopping() {
        let p = model(8, 0.0);
        assert_eq!(zero_hopping_filling(&p, -2.73, 6).unwrap().0, 1);
        assert_eq!(zero_hopping_filling(&p, -10.0, 6).unwrap().0, 0);
        let (n, e) = zero_hopping_filling(&model(1, 0.0), -1.5, 6).unwrap();
        assert_eq!((n, e), (0, 0.0));
    }
}
