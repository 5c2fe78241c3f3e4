//! Implementation results against independently computed references.

use num_complex::Complex64;
use wh_purity::channels::{wh_channel, wh_linear_form, Channel};
use wh_purity::injective::{antisymmetric_vector, check_mu_multiplicativity, mu, overlap, AlternatingConfig};
use wh_purity::linalg::{eig_hermitian, kron, kron_vec, partial_trace, schatten_norm, ComplexMatrix, Exponent, PureState, Subsystem};
use wh_purity::purity::{
    delta, delta_max_entangled, nu_p_numeric, nu_p_wh_analytic, ss_output_matrix, ss_output_spectrum, AscentConfig,
    SchmidtVector,
};
use wh_purity::random::{haar_state, random_density, random_hermitian, random_matrix, rng_for};
use wh_purity::TensorVector;

/// Characteristic polynomial coefficients by Faddeev-LeVerrier:
/// `det(λ𝟙 − A) = Σ c_k λ^{n−k}`, `c_0 = 1`.
fn char_poly(a: &ComplexMatrix) -> Vec<f64> {
    let n = a.rows();
    let mut coeffs = vec![1.0];
    let mut m = ComplexMatrix::zeros(n, n);
    for k in 1..=n {
        let prev = *coeffs.last().unwrap();
        m = &a.matmul(&m) + &ComplexMatrix::identity(n).scale_real(prev);
        let ck = -a.matmul(&m).trace().re / k as f64;
        coeffs.push(ck);
    }
    coeffs
}

fn poly_eval(c: &[f64], x: f64) -> f64 {
    c.iter().fold(0.0, |acc, &ck| acc * x + ck)
}

/// Real roots by sign scanning plus bisection.
fn poly_roots(c: &[f64], bound: f64, grid: usize) -> Vec<f64> {
    let mut roots = Vec::new();
    let step = 2.0 * bound / grid as f64;
    for i in 0..grid {
        let (mut lo, mut hi) = (-bound + i as f64 * step, -bound + (i + 1) as f64 * step);
        let (flo, fhi) = (poly_eval(c, lo), poly_eval(c, hi));
        if flo == 0.0 {
            roots.push(lo);
            continue;
        }
        if flo.signum() == fhi.signum() {
            continue;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if poly_eval(c, mid).signum() == flo.signum() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        roots.push(0.5 * (lo + hi));
    }
    roots.sort_by(|a, b| b.total_cmp(a));
    roots
}

#[test]
fn eigenvalues_match_characteristic_polynomial_roots() {
    let mut rng = rng_for(42, 0);
    for _ in 0..10 {
        let m = random_hermitian(&mut rng, 5);
        let roots = poly_roots(&char_poly(&m), m.frobenius_norm() + 1.0, 20_000);
        let spec = eig_hermitian(&m).unwrap();
        assert_eq!(roots.len(), 5, "oracle missed a root");
        for (r, l) in roots.iter().zip(spec.values()) {
            assert!((r - l).abs() < 1e-8, "{r} vs {l}");
        }
    }
}

#[test]
fn eigen_reconstruction_residual() {
    let mut rng = rng_for(43, 0);
    for n in [1, 2, 5, 9, 27] {
        let m = random_hermitian(&mut rng, n);
        let e = wh_purity::linalg::eigh(&m).unwrap();
        assert!((&m - &e.reconstruct()).frobenius_norm() <= 1e-9 * m.frobenius_norm());
    }
}

#[test]
fn wh_block_spectrum_d3() {
    // one eigenvalue 2 − 2/d, d² − 1 eigenvalues 1 − 2/d
    let d = 3.0;
    let mut diag = vec![1.0 - 2.0 / d; 8];
    diag.push(2.0 - 2.0 / d);
    let m = ComplexMatrix::from_real_diagonal(&diag);
    let u = wh_purity::random::haar_unitary(&mut rng_for(1, 1), 9);
    let s = eig_hermitian(&u.matmul(&m).matmul(&u.adjoint())).unwrap();
    assert!((s.values()[0] - 4.0 / 3.0).abs() < 1e-12);
    for v in &s.values()[1..] {
        assert!((v - 1.0 / 3.0).abs() < 1e-12);
    }
}

#[test]
fn kron_matches_index_loop() {
    let mut rng = rng_for(3, 0);
    for _ in 0..5 {
        let a = random_matrix(&mut rng, 2, 2);
        let b = random_matrix(&mut rng, 2, 2);
        let k = kron(&a, &b);
        for i in 0..2 {
            for j in 0..2 {
                for r in 0..2 {
                    for s in 0..2 {
                        assert_eq!(k[(2 * i + r, 2 * j + s)], a[(i, j)] * b[(r, s)]);
                    }
                }
            }
        }
        let u = haar_state(&mut rng, 2);
        let v = haar_state(&mut rng, 3);
        let w = kron_vec(&u, &v);
        for i in 0..2 {
            for j in 0..3 {
                assert_eq!(w.amplitudes()[3 * i + j], u.amplitudes()[i] * v.amplitudes()[j]);
            }
        }
    }
}

#[test]
fn partial_trace_of_product_state() {
    let mut rng = rng_for(4, 0);
    let a = haar_state(&mut rng, 3);
    let b = haar_state(&mut rng, 2);
    let rho = kron_vec(&a, &b).projector();
    let left = partial_trace(&rho, (3, 2), Subsystem::First).unwrap();
    // direct summation: (ρ_A)_{ij} = Σ_k ρ_{(i,k),(j,k)}
    let mut direct = ComplexMatrix::zeros(3, 3);
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..2 {
                direct[(i, j)] += rho[(i * 2 + k, j * 2 + k)];
            }
        }
    }
    assert!(left.max_abs_diff(&direct) < 1e-12);
    assert!(left.max_abs_diff(&a.projector()) < 1e-12);
    let right = partial_trace(&rho, (3, 2), Subsystem::Second).unwrap();
    assert!(right.max_abs_diff(&b.projector()) < 1e-12);
}

#[test]
fn wh_kraus_form_equals_linear_form() {
    for d in [3, 4, 5, 6] {
        let ch = wh_channel(d).unwrap();
        let mut rng = rng_for(d as u64, 0);
        for _ in 0..20 {
            // arbitrary (non-Hermitian) inputs too: both forms are linear
            let x = random_matrix(&mut rng, d, d);
            assert!(ch.apply(&x).unwrap().max_abs_diff(&wh_linear_form(&x)) < 1e-12);
        }
    }
}

#[test]
fn tensor_channel_on_product_state_matches_factorwise() {
    let ch = wh_channel(3).unwrap();
    let ss = ch.tensor(&ch);
    let mut rng = rng_for(6, 0);
    let (u, v) = (haar_state(&mut rng, 3), haar_state(&mut rng, 3));
    let joint = ss.apply(&kron_vec(&u, &v).projector()).unwrap();
    let factorwise = kron(&ch.apply(&u.projector()).unwrap(), &ch.apply(&v.projector()).unwrap());
    assert!(joint.max_abs_diff(&factorwise) < 1e-12);
}

#[test]
fn eq11_closed_form_matches_dense_norm() {
    let dense = ss_output_matrix(SchmidtVector::maximally_entangled(3).coeffs());
    let two_norm = schatten_norm(&dense, Exponent::Finite(2.0)).unwrap();
    assert!((two_norm - 1.5f64.sqrt() / 3.0).abs() < 1e-12);
    assert!((two_norm - 0.40825).abs() < 1e-5);
    assert!((schatten_norm(&dense, Exponent::Infinity).unwrap() - 1.0 / 3.0).abs() < 1e-12);
}

#[test]
fn structured_delta_matches_dense_delta() {
    let mut rng = rng_for(8, 0);
    for _ in 0..20 {
        let sq: Vec<f64> = {
            let raw: Vec<f64> = (0..3).map(|_| rand::Rng::random::<f64>(&mut rng)).collect();
            let s: f64 = raw.iter().sum();
            raw.iter().map(|x| x / s).collect()
        };
        let c = SchmidtVector::from_squares(&sq).unwrap();
        for p in [Exponent::Finite(1.5), Exponent::Finite(3.0), Exponent::Finite(6.5), Exponent::Infinity] {
            let dense = schatten_norm(&ss_output_matrix(c.coeffs()), p).unwrap().ln()
                - 2.0 * nu_p_wh_analytic(3, p).unwrap().ln();
            assert!((delta(p, &c).unwrap() - dense).abs() < 1e-10);
        }
    }
}

#[test]
fn delta_is_symmetric_in_schmidt_coefficients() {
    // permuted, unsorted coefficients through the dense path
    let sq = [0.6f64, 0.3, 0.1];
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    for p in [Exponent::Finite(4.0), Exponent::Finite(5.0)] {
        let vals: Vec<f64> = perms
            .iter()
            .map(|perm| {
                let c: Vec<f64> = perm.iter().map(|&i| sq[i].sqrt()).collect();
                schatten_norm(&ss_output_matrix(&c), p).unwrap()
            })
            .collect();
        for v in &vals {
            assert!((v - vals[0]).abs() < 1e-10);
        }
    }
}

#[test]
fn closed_form_delta_matches_spectrum_path() {
    let me = SchmidtVector::maximally_entangled(3);
    for p in [1.5, 2.0, 3.0, 4.0, 4.7823, 5.0, 8.0] {
        let p = Exponent::Finite(p);
        assert!((delta_max_entangled(p).unwrap() - delta(p, &me).unwrap()).abs() < 1e-10);
    }
    assert!((delta_max_entangled(Exponent::Infinity).unwrap() - delta(Exponent::Infinity, &me).unwrap()).abs() < 1e-10);
}

#[test]
fn delta_max_entangled_strictly_increasing() {
    let vals: Vec<f64> =
        (0..100).map(|i| delta_max_entangled(Exponent::Finite(2.0 + 8.0 * i as f64 / 99.0)).unwrap()).collect();
    assert!(vals.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn pure_wh_output_spectrum_is_input_independent() {
    for d in [3, 4, 5] {
        let ch = wh_channel(d).unwrap();
        let mut rng = rng_for(10 + d as u64, 0);
        for _ in 0..10 {
            let phi = haar_state(&mut rng, d);
            let s = eig_hermitian(&ch.apply(&phi.projector()).unwrap()).unwrap();
            for v in &s.values()[..d - 1] {
                assert!((v - 1.0 / (d as f64 - 1.0)).abs() < 1e-10);
            }
            assert!(s.min().abs() < 1e-10);
        }
    }
}

#[test]
fn numeric_nu_p_never_exceeds_analytic() {
    let cfg = AscentConfig { restarts: 10, ..AscentConfig::default() };
    for d in [3, 4] {
        let ch = wh_channel(d).unwrap();
        for p in [Exponent::Finite(1.5), Exponent::Finite(2.5), Exponent::Infinity] {
            let gap = nu_p_numeric(&ch, p, &cfg, 7).unwrap().value - nu_p_wh_analytic(d, p).unwrap();
            assert!((-1e-6..=1e-12).contains(&gap), "d={d} p={p}: {gap}");
        }
    }
}

#[test]
fn product_channel_beats_squared_single_value() {
    let ch = wh_channel(3).unwrap();
    let ss = ch.tensor(&ch);
    let cfg = AscentConfig { restarts: 20, ..AscentConfig::default() };
    for p in [Exponent::Finite(2.0), Exponent::Finite(5.0), Exponent::Infinity] {
        let single = nu_p_wh_analytic(3, p).unwrap();
        let r = nu_p_numeric(&ss, p, &cfg, 0).unwrap();
        assert!(r.value >= single * single - 1e-8);
    }
    let r = nu_p_numeric(&ss, Exponent::Finite(5.0), &cfg, 0).unwrap();
    let eq11 = (1.0 + 2f64.powi(-7)).powf(0.2) / 3.0;
    assert!((r.value - eq11).abs() < 1e-6);
    let via_delta = (delta_max_entangled(Exponent::Finite(5.0)).unwrap().exp()) * nu_p_wh_analytic(3, Exponent::Finite(5.0)).unwrap().powi(2);
    assert!((r.value - via_delta).abs() < 1e-6);
}

/// Top singular value of a `rows x cols` matrix via the eigensolver on `M†M`.
fn top_singular(m: &ComplexMatrix) -> f64 {
    eig_hermitian(&m.adjoint().matmul(m)).unwrap().max().sqrt()
}

#[test]
fn bipartite_mu_is_top_singular_value() {
    let mut rng = rng_for(12, 0);
    for _ in 0..5 {
        let m = random_matrix(&mut rng, 3, 4);
        let v = TensorVector::new(vec![3, 4], m.as_slice().to_vec()).unwrap();
        let cfg = AlternatingConfig { restarts: Some(20), ..AlternatingConfig::default() };
        let fit = mu(&v, &cfg, 0).unwrap();
        assert!((fit.value - top_singular(&m)).abs() < 1e-9);
    }
}

#[test]
fn antisymmetric_mu_matches_grid_search() {
    // real spherical grid for two factors, exact optimum for the third
    let eps = antisymmetric_vector(3).unwrap();
    let n = 24;
    let pts: Vec<PureState> = (0..=n)
        .flat_map(|i| {
            (0..2 * n).map(move |j| {
                let (t, f) = (std::f64::consts::PI * i as f64 / n as f64, std::f64::consts::PI * j as f64 / n as f64);
                PureState::normalized(vec![
                    Complex64::new(t.sin() * f.cos(), 0.0),
                    Complex64::new(t.sin() * f.sin(), 0.0),
                    Complex64::new(t.cos(), 0.0),
                ])
                .unwrap()
            })
        })
        .collect();
    let mut best = 0.0f64;
    for a in pts.iter().step_by(7) {
        for b in &pts {
            // c_k = Σ_ij conj(ε_ijk) a_i b_j; the optimum over the third factor is ‖c‖
            let mut c = [Complex64::new(0.0, 0.0); 3];
            for i in 0..3 {
                for j in 0..3 {
                    for (k, ck) in c.iter_mut().enumerate() {
                        *ck += eps.get(&[i, j, k]).conj() * a.amplitudes()[i] * b.amplitudes()[j];
                    }
                }
            }
            best = best.max(c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt());
        }
    }
    let fit = mu(&eps, &AlternatingConfig::default(), 0).unwrap();
    assert!((best - 1.0 / 6f64.sqrt()).abs() < 1e-3);
    assert!(fit.value >= best - 1e-12);
    assert!((fit.value - 1.0 / 6f64.sqrt()).abs() < 1e-9);
    assert!((overlap(&eps, &fit.factors).unwrap() - fit.value).abs() < 1e-12);
}

#[test]
fn antisymmetric_with_product_is_multiplicative() {
    let eps = antisymmetric_vector(3).unwrap();
    let prod = TensorVector::product(&[PureState::basis(3, 0), PureState::basis(3, 1), PureState::basis(3, 2)]).unwrap();
    let cfg = AlternatingConfig { restarts: Some(100), ..AlternatingConfig::default() };
    let c = check_mu_multiplicativity(&eps, &prod, &cfg, 0).unwrap();
    assert!((c.ratio - 1.0).abs() < 1e-6);
}

#[test]
fn mu_of_channel_matches_nu_infinity_on_random_channels() {
    // random 3-Kraus channels C^2 → C^3: A_x = G_x (Σ G†G)^{-1/2}
    let mut rng = rng_for(21, 0);
    for trial in 0..3 {
        let gs: Vec<ComplexMatrix> = (0..3).map(|_| random_matrix(&mut rng, 3, 2)).collect();
        let mut sum = ComplexMatrix::zeros(2, 2);
        for g in &gs {
            sum = &sum + &g.adjoint().matmul(g);
        }
        let inv_sqrt = wh_purity::linalg::hermitian_function(&sum, |x| 1.0 / x.sqrt()).unwrap();
        let kraus = gs.iter().map(|g| g.matmul(&inv_sqrt)).collect();
        let ch = Channel::new(2, 3, kraus).unwrap();
        let cfg = AlternatingConfig { restarts: Some(200), ..AlternatingConfig::default() };
        let via_mu = wh_purity::injective::mu_of_channel(&ch, &cfg, trial).unwrap();
        let via_nu = nu_p_numeric(&ch, Exponent::Infinity, &AscentConfig::default(), trial).unwrap().value;
        assert!((via_mu - via_nu).abs() < 1e-6, "{via_mu} vs {via_nu}");
    }
}

#[test]
fn apply_preserves_trace_and_positivity() {
    let mut rng = rng_for(30, 0);
    let ch = wh_channel(4).unwrap();
    let ss = wh_channel(3).unwrap().tensor(&wh_channel(3).unwrap());
    for _ in 0..5 {
        let rho = random_density(&mut rng, 4);
        let out = ch.apply(&rho).unwrap();
        assert!((out.trace().re - 1.0).abs() < 1e-10);
        assert!(eig_hermitian(&out).unwrap().min() >= -1e-10);
        let rho9 = random_density(&mut rng, 9);
        let out9 = ss.apply(&rho9).unwrap();
        assert!(eig_hermitian(&out9).unwrap().is_density(1e-10, 1e-10));
    }
    let spec = ss_output_spectrum(&SchmidtVector::from_squares(&[0.5, 0.3, 0.2]).unwrap()).unwrap();
    assert!((spec.sum() - 1.0).abs() < 1e-10);
}
