mod common;

use common::*;
use nalgebra::DMatrix;
use opendiv_core::matcore::{expm, herm_eigvals, leading_principal_submatrix, psd_check, Lu};
use opendiv_core::{ComplexMatrix, Error, C64};
use proptest::prelude::*;

fn to_nalgebra(a: &ComplexMatrix) -> DMatrix<nalgebra::Complex<f64>> {
    DMatrix::from_fn(a.rows(), a.cols(), |r, c| nalgebra::Complex::new(a[(r, c)].re, a[(r, c)].im))
}

#[test]
fn eigenvalues_match_reference_solver() {
    let mut rng = rng(11);
    for n in [1, 2, 3, 6, 9] {
        for _ in 0..20 {
            let a = hermitian(&mut rng, n);
            let ours = herm_eigvals(&a).unwrap();
            let mut theirs: Vec<f64> = to_nalgebra(&a).symmetric_eigenvalues().iter().copied().collect();
            theirs.sort_by(f64::total_cmp);
            for (x, y) in ours.iter().zip(&theirs) {
                assert!((x - y).abs() < 1e-10, "n={n}: {x} vs {y}");
            }
        }
    }
}

#[test]
fn degenerate_spectrum() {
    let mut rng = rng(12);
    let u = unitary(&mut rng, 5);
    let d = ComplexMatrix::diag(&[c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(-2.0, 0.0), c(-2.0, 0.0)]);
    let a = &(&u * &d) * &u.adjoint();
    let vals = herm_eigvals(&a).unwrap();
    let expected = [-2.0, -2.0, 1.0, 1.0, 1.0];
    assert!(vals.iter().zip(expected).all(|(x, y)| (x - y).abs() < 1e-10));
}

#[test]
fn psd_errors() {
    let rect = ComplexMatrix::zeros(2, 3);
    assert!(matches!(psd_check(&rect, 1e-10), Err(Error::NotSquare { .. })));
    let mut nh = ComplexMatrix::identity(2);
    nh[(0, 1)] = c(1.0, 0.0);
    assert!(matches!(psd_check(&nh, 1e-10), Err(Error::NotHermitian { .. })));
}

fn taylor_expm(a: &ComplexMatrix) -> ComplexMatrix {
    let n = a.rows();
    let mut sum = ComplexMatrix::identity(n);
    let mut term = ComplexMatrix::identity(n);
    for k in 1..=60 {
        term = (&term * a).scale_real(1.0 / k as f64);
        sum = &sum + &term;
    }
    sum
}

#[test]
fn expm_matches_taylor_on_small_norm() {
    let mut rng = rng(13);
    for n in [2, 4, 7] {
        for _ in 0..10 {
            let a = gaussian(&mut rng, n, n);
            let a = a.scale_real(1.5 / a.norm_one());
            let diff = expm(&a).unwrap().max_abs_diff(&taylor_expm(&a));
            assert!(diff < 1e-12, "{diff}");
        }
    }
}

#[test]
fn expm_rotation_generator() {
    let theta = 2.3;
    let a = ComplexMatrix::from_real(2, 2, &[0.0, -theta, theta, 0.0]).unwrap();
    let e = expm(&a).unwrap();
    let r = ComplexMatrix::from_real(2, 2, &[theta.cos(), -theta.sin(), theta.sin(), theta.cos()]).unwrap();
    assert!(e.max_abs_diff(&r) < 1e-13);
}

#[test]
fn lu_solves_random_systems() {
    let mut rng = rng(14);
    for n in [1, 3, 8] {
        let a = gaussian(&mut rng, n, n);
        let inv = Lu::factor(&a).unwrap().inverse().unwrap();
        assert!((&a * &inv).max_abs_diff(&ComplexMatrix::identity(n)) < 1e-10);
    }
}

fn hermitian_strategy() -> impl Strategy<Value = ComplexMatrix> {
    (2usize..7, any::<u64>()).prop_map(|(n, seed)| {
        let mut r = rng(seed);
        let mut a = hermitian(&mut r, n);
        // Shift so that roughly half the samples are PSD.
        let shift = herm_eigvals(&a).unwrap()[0];
        let offset: f64 = rand::Rng::random_range(&mut r, -0.5..0.5);
        for i in 0..n {
            a[(i, i)] -= c(shift + offset, 0.0);
        }
        a
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn psd_passes_to_leading_minors(a in hermitian_strategy()) {
        let whole = psd_check(&a, 1e-10).unwrap();
        if whole.is_psd {
            for j in 1..a.rows() {
                let sub = leading_principal_submatrix(&a, j).unwrap();
                prop_assert!(psd_check(&sub, 1e-10).unwrap().is_psd);
            }
        }
    }

    #[test]
    fn eigenvalue_sum_is_trace(a in hermitian_strategy()) {
        let s: f64 = herm_eigvals(&a).unwrap().iter().sum();
        prop_assert!((s - a.trace().re).abs() <= 1e-10 * a.max_abs().max(1.0) * a.rows() as f64);
    }

    #[test]
    fn expm_inverse_pair(seed in any::<u64>(), n in 1usize..6, norm in 0.01f64..5.0) {
        let a = gaussian(&mut rng(seed), n, n);
        let a = a.scale_real(norm / a.norm_one());
        let prod = &expm(&a).unwrap() * &expm(&(-&a)).unwrap();
        prop_assert!(prod.max_abs_diff(&ComplexMatrix::identity(n)) < 1e-9);
    }
}

#[test]
fn psd_verdict_reports_scaled_tolerance() {
    let a = ComplexMatrix::diag(&[C64::new(100.0, 0.0), C64::new(-1e-9, 0.0)]);
    let v = psd_check(&a, 1e-10).unwrap();
    assert!((v.tolerance_used - 1e-8).abs() < 1e-20);
    assert!(v.is_psd);
}
