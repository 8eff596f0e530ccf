//! Property tests for solver invariants and independent oracles.

use polariton::band::BandedSymmetric;
use polariton::disorder::{
    disorder_stats, lobe_survival, one_excitation_energy, site_energies_collective, site_energies_exact, DisorderSpec,
    DEFAULT_SUBSPACE_BUDGET,
};
use polariton::eigen::{eigenvalues, lowest_eigenpair, SymmetricMatrix};
use polariton::kerr::format::{decode_binary, decode_text, encode_binary, encode_text};
use polariton::kerr::{hopping_integral, normalize_mode, MaterialMaps, ScalarField3D};
use polariton::observables::polariton_fractions;
use polariton::params::{ModelParams, SystemParams};
use proptest::prelude::*;

/// Cyclic Jacobi rotations; slow but independent of the library's solver.
fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _ in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[i][j] * a[i][j]).sum();
        if off < 1e-26 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut d: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    d.sort_by(f64::total_cmp);
    d
}

fn symmetric(n: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(-5.0..5.0f64, n * n).prop_map(move |v| {
        let mut a = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..=i {
                a[i][j] = v[i * n + j];
                a[j][i] = v[i * n + j];
            }
        }
        a
    })
}

fn gaussian_field(n: usize, h: f64, amplitude: f64) -> ScalarField3D {
    let half = h * (n - 1) as f64 / 2.0;
    let s2 = (half / 3.0).powi(2);
    ScalarField3D::from_fn([n; 3], [h; 3], [-half; 3], |[x, y, z]| amplitude * (-(x * x + y * y + z * z) / (2.0 * s2)).exp())
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fractions_sum_to_one(big_n in 1usize..200, det in -40.0..40.0f64) {
        let f = polariton_fractions(&ModelParams::new(big_n, 4, det).unwrap());
        prop_assert!((f.c_ph_sq + f.c_ex_sq - 1.0).abs() < 1e-12);
        prop_assert!(f.c_ph_sq > 0.0 && f.c_ex_sq > 0.0);
    }

    #[test]
    fn dense_solver_matches_jacobi(a in (2usize..9).prop_flat_map(symmetric)) {
        let n = a.len();
        let m = SymmetricMatrix::from_lower(n, |i, j| a[i][j]);
        let ours = eigenvalues(&m).unwrap();
        let oracle = jacobi_eigenvalues(a.clone());
        for (x, y) in ours.iter().zip(&oracle) {
            prop_assert!((x - y).abs() < 1e-9, "{ours:?} vs {oracle:?}");
        }
        let pair = lowest_eigenpair(&m).unwrap();
        let mv = m.mul_vec(&pair.vector);
        for (mvi, vi) in mv.iter().zip(&pair.vector) {
            prop_assert!((mvi - pair.value * vi).abs() < 1e-8);
        }
    }

    #[test]
    fn banded_solver_matches_dense(
        dim in 3usize..30,
        bw in 1usize..4,
        seed in prop::collection::vec(-3.0..3.0f64, 30 * 4),
    ) {
        let bw = bw.min(dim - 1);
        let mut band = BandedSymmetric::zeros(dim, bw);
        let mut dense = SymmetricMatrix::zeros(dim);
        for i in 0..dim {
            for d in 0..=bw.min(i) {
                let v = seed[i * 4 + d];
                band.add(i, i - d, v);
                dense.set(i, i - d, v);
            }
        }
        let b = band.lowest_eigenpair().unwrap().value;
        let d = lowest_eigenpair(&dense).unwrap().value;
        prop_assert!((b - d).abs() < 1e-8 * (1.0 + d.abs()), "{b} vs {d}");
    }

    #[test]
    fn survival_is_monotone(u in 0.01..2.0f64, de in 0.0..1.0f64, du in 0.0..0.5f64, extra in 0.0..0.5f64, n in 1usize..5) {
        let base = lobe_survival(u, de, du, n);
        let worse_e = lobe_survival(u, de + extra, du, n);
        let worse_u = lobe_survival(u, de, du + extra, n);
        let higher = lobe_survival(u, de, du, n + 1);
        for w in [worse_e, worse_u, higher] {
            prop_assert!(w.effective_width <= base.effective_width);
            prop_assert!(!w.survives || base.survives);
        }
    }

    #[test]
    fn collective_one_excitation_is_exact(det in -10.0..20.0f64, g in prop::collection::vec(0.05..1.5f64, 1..25)) {
        let n = g.len();
        let mut m = SymmetricMatrix::zeros(n + 1);
        m.set(0, 0, det);
        for (k, gk) in g.iter().enumerate() {
            m.set(k + 1, 0, *gk);
        }
        let dense = lowest_eigenpair(&m).unwrap().value;
        prop_assert!((one_excitation_energy(det, &g) - dense).abs() < 1e-10);
        prop_assert!((site_energies_collective(det, &g).unwrap().e1 - dense).abs() < 1e-10);
    }

    #[test]
    fn exact_sites_are_permutation_invariant(det in -5.0..15.0f64, g in prop::collection::vec(0.2..1.2f64, 2..7)) {
        let a = site_energies_exact(det, &g, DEFAULT_SUBSPACE_BUDGET).unwrap();
        let mut rev = g.clone();
        rev.reverse();
        let b = site_energies_exact(det, &rev, DEFAULT_SUBSPACE_BUDGET).unwrap();
        prop_assert!((a.e2 - b.e2).abs() < 1e-10 && (a.u - b.u).abs() < 1e-10);
        // U ≥ 0: two excitations cost at least twice one
        prop_assert!(a.u > -1e-12);
    }

    #[test]
    fn normalization_is_scale_covariant(amp in 1e-3..1e3f64, k in 1.0..20.0f64) {
        let phi = gaussian_field(13, 1e-7, amp);
        let maps = MaterialMaps::uniform(&phi, k, 0.0).unwrap();
        let a = normalize_mode(&phi, &maps.k_c).unwrap();
        let b = normalize_mode(&phi.scaled(2.5), &maps.k_c).unwrap();
        prop_assert!((a.scale - 2.5 * b.scale).abs() / a.scale < 1e-12);
        for (x, y) in a.phi.values().iter().zip(b.phi.values()) {
            prop_assert!((x - y).abs() <= 1e-12 * x.abs().max(1e-300));
        }
    }

    #[test]
    fn hopping_is_symmetric_under_displacement(m in 0i32..6, axis in 0usize..3) {
        let h = 1e-7;
        let phi = normalize_mode(&gaussian_field(15, h, 1.0), &gaussian_field(15, h, 0.0).constant_like(12.0).unwrap()).unwrap().phi;
        let k_c = phi.constant_like(12.0).unwrap();
        let mut d = [0.0; 3];
        d[axis] = m as f64 * h;
        let plus = hopping_integral(&k_c, &phi, d).unwrap().t;
        d[axis] = -d[axis];
        let minus = hopping_integral(&k_c, &phi, d).unwrap().t;
        prop_assert!((plus - minus).abs() < 1e-12 * plus.abs().max(1e-30));
    }

    #[test]
    fn field_formats_round_trip(
        dims in (1usize..5, 1usize..5, 1usize..5),
        spacing in 1e-9..1e-5f64,
        origin in -1e-5..1e-5f64,
        values in prop::collection::vec(any::<f64>().prop_filter("finite", |v| v.is_finite()), 64),
    ) {
        let n = [dims.0, dims.1, dims.2];
        let len = n[0] * n[1] * n[2];
        let f = ScalarField3D::new(n, [spacing, 2.0 * spacing, 0.5 * spacing], [origin, -origin, 0.0], values[..len].to_vec())
        .unwrap();
        prop_assert_eq!(&decode_binary(&encode_binary(&f)).unwrap(), &f);
        let mut text = Vec::new();
        encode_text(&f, &mut text).unwrap();
        prop_assert_eq!(&decode_text(std::str::from_utf8(&text).unwrap()).unwrap(), &f);
    }
}

fn reference_base() -> SystemParams {
    SystemParams::reference_defaults(3, 12.0).unwrap()
}

#[test]
fn disorder_stats_are_reproducible_and_seeded() {
    let base = reference_base();
    let spec = DisorderSpec {
        sigma_omega: 0.2 * base.g(),
        delta_g: 0.1,
        n_sigma: 1.0,
        sample_count: 3_000,
        seed: 42,
        ..DisorderSpec::clean(3.0)
    };
    let a = disorder_stats(&spec, &base).unwrap();
    let b = disorder_stats(&spec, &base).unwrap();
    assert_eq!(a, b);
    let c = disorder_stats(&DisorderSpec { seed: 43, ..spec }, &base).unwrap();
    assert_ne!(a.delta_e, c.delta_e);
}

#[test]
fn photon_disorder_width_follows_photon_fraction() {
    // E1 moves with the cavity frequency at rate c_ph²; a Gaussian's central
    // 99% half-width is 2.5758σ
    let base = reference_base();
    let sigma = 0.01 * base.g();
    let spec = DisorderSpec {
        sigma_omega: sigma,
        sample_count: 20_000,
        seed: 9,
        ..DisorderSpec::clean(3.0)
    };
    let st = disorder_stats(&spec, &base).unwrap();
    let c_ph_sq = polariton_fractions(&base.model()).c_ph_sq;
    let expected = c_ph_sq * 2.575_829 * sigma;
    assert!((st.delta_e - expected).abs() / expected < 0.05, "{} vs {expected}", st.delta_e);
    assert!(st.delta_u < st.delta_e);
}

#[test]
fn monte_carlo_width_is_stable_in_sample_count() {
    let base = reference_base();
    let spec = DisorderSpec {
        sigma_omega: 0.3 * base.g(),
        delta_g: 0.1,
        sample_count: 10_000,
        seed: 1,
        ..DisorderSpec::clean(3.0)
    };
    let a = disorder_stats(&spec, &base).unwrap();
    let b = disorder_stats(&DisorderSpec { sample_count: 20_000, ..spec }, &base).unwrap();
    assert!((a.delta_e - b.delta_e).abs() / b.delta_e < 0.05);
    assert!((a.delta_u - b.delta_u).abs() / b.delta_u < 0.08);
}

#[test]
fn counts_are_monotone_in_spread() {
    // a common uniform maps to counts ordered by the law's quantiles
    let narrow = DisorderSpec { n_sigma: 0.9, ..DisorderSpec::clean(3.0) }.count_law();
    let wide = DisorderSpec { n_sigma: 1.5, ..DisorderSpec::clean(3.0) }.count_law();
    for i in 1..100 {
        let u = i as f64 / 100.0;
        if u < 0.5 {
            assert!(wide.quantile(u) <= narrow.quantile(u));
        } else if u > 0.6 {
            assert!(wide.quantile(u) >= narrow.quantile(u));
        }
    }
}
