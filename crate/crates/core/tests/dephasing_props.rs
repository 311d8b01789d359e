mod common;

use common::*;
use opendiv_core::canonical::{decoherence_matrix, gell_mann_basis, is_divisible_generator};
use opendiv_core::dephasing::*;
use opendiv_core::matcore::{leading_principal_submatrix, psd_check};
use opendiv_core::superop::is_cptp;
use opendiv_core::{ComplexMatrix, TimeGrid};
use rand::Rng;

const TOL: f64 = 1e-10;

fn family(bath: BathSpec, k: usize) -> DephasingFamily {
    DephasingFamily::new(bath, k, TimeGrid::uniform(0.0, 1.0, 2).unwrap()).unwrap()
}

fn samples(seed: u64, count: usize) -> Vec<(BathSpec, f64)> {
    let mut rng = rng(seed);
    (0..count).map(|_| (random_bath(&mut rng), rng.random_range(0.0..6.0))).collect()
}

#[test]
fn eta_matches_high_precision_values() {
    let single = BathSpec::single_mode(1.0, 1.0, 1.0).unwrap();
    let at_pi = eta(&single, std::f64::consts::PI);
    assert!((at_pi.re - -0.771_936_832_905_304_7).abs() < 1e-14 && at_pi.im.abs() < 1e-14);
    let z = eta(&single, 1.3);
    assert!((z - c(-0.426_949_932_221_871_8, -0.374_598_901_424_604_8)).norm() < 1e-14);
    let two = BathSpec::new(
        vec![BathMode { omega: 0.5, coupling: 0.8 }, BathMode { omega: 2.0, coupling: -1.7 }],
        0.7,
    )
    .unwrap();
    assert!((eta(&two, 2.25) - c(-0.965_705_171_096_267_7, -0.439_976_710_376_945_7)).norm() < 1e-13);
}

#[test]
fn eta_and_mu_conjugate_symmetry() {
    for (bath, t) in samples(41, 40) {
        assert!((eta(&bath, -t) - eta(&bath, t).conj()).norm() < 1e-12);
        for j in 1..6 {
            assert!((mu(&bath, -j, t) - mu(&bath, j, t).conj()).norm() < 1e-12);
        }
    }
}

#[test]
fn mu_is_time_derivative_of_scaled_eta() {
    let h = 1e-6;
    for (bath, t) in samples(42, 30) {
        for j in [-3i64, -1, 1, 2, 5] {
            let jf = j as f64;
            let fd = (eta(&bath, jf * (t + h)) - eta(&bath, jf * (t - h))) / (2.0 * h);
            let exact = mu(&bath, j, t);
            assert!((fd - exact).norm() <= 1e-6 * exact.norm().max(1.0), "j={j} t={t}");
        }
    }
}

#[test]
fn congruence_identity_and_psd_equivalence() {
    for (bath, t) in samples(43, 60) {
        for k in 2..=8 {
            let fam = family(bath.clone(), k);
            let d_b = decoherence_block(&fam, t);
            let d = toeplitz_d(&fam, t);
            let v = congruence_v(k).unwrap();
            let rhs = &(&v * &d) * &v.adjoint();
            assert!(d_b.max_abs_diff(&rhs) <= 1e-10, "k={k} t={t}");
            assert!(d_b.hermiticity_deviation() <= 1e-12);
            assert_eq!(psd_check(&d_b, TOL).unwrap().is_psd, psd_check(&d, TOL).unwrap().is_psd, "k={k} t={t}");
        }
    }
}

#[test]
fn toeplitz_structure() {
    for (bath, t) in samples(44, 20) {
        for j in 0..6 {
            assert!((toeplitz_entry(&bath, -j, t) - toeplitz_entry(&bath, j, t).conj()).norm() < 1e-12);
        }
        let d6 = toeplitz_d_level(&bath, 6, t).unwrap();
        for j in 1..5 {
            let lead = leading_principal_submatrix(&d6, j).unwrap();
            assert_eq!(lead, toeplitz_d_level(&bath, j + 1, t).unwrap());
        }
        let d2 = toeplitz_d_level(&bath, 2, t).unwrap();
        assert!((d2[(0, 0)].re + 2.0 * mu(&bath, 1, t).re).abs() < 1e-12);
    }
}

#[test]
fn congruence_determinant() {
    for k in 2..=8 {
        let v = congruence_v(k).unwrap();
        let det: f64 = (0..k - 1).map(|i| v[(i, i)].re).product();
        let expected: f64 = (1..k).map(|l| l as f64 / ((l * (l + 1)) as f64).sqrt()).product();
        assert!((det - expected).abs() < 1e-14);
        if k > 2 {
            assert!(v[(0, 1)].norm() == 0.0);
        }
    }
}

#[test]
fn full_decoherence_matrix_has_single_block() {
    for (bath, t) in samples(45, 8) {
        for k in 2..=5 {
            let fam = family(bath.clone(), k);
            let g = dephasing_generator(&fam, t).unwrap();
            let d = decoherence_matrix(&g, &gell_mann_basis(k).unwrap()).unwrap().mat;
            let block = decoherence_block(&fam, t);
            for p in 0..k * k - 1 {
                for q in 0..k * k - 1 {
                    let expected = if p < k - 1 && q < k - 1 { block[(p, q)] } else { c(0.0, 0.0) };
                    assert!((d[(p, q)] - expected).norm() < 1e-10);
                }
            }
            let generator_verdict = is_divisible_generator(&g, TOL).unwrap().is_psd;
            assert_eq!(generator_verdict, psd_check(&toeplitz_d(&fam, t), TOL).unwrap().is_psd, "k={k} t={t}");
        }
    }
}

#[test]
fn generator_is_derivative_of_map() {
    let h = 1e-6;
    for (bath, t) in samples(46, 10) {
        let t = t + 0.1;
        let fam = family(bath, 4);
        let l = dephasing_generator(&fam, t).unwrap().superoperator();
        let fd = (dephasing_map(&fam, t + h).mat() - dephasing_map(&fam, t - h).mat()).scale_real(0.5 / h);
        let expected = l.compose(&dephasing_map(&fam, t)).unwrap();
        let scale = expected.mat().max_abs().max(1.0);
        assert!(fd.max_abs_diff(expected.mat()) <= 1e-6 * scale);
    }
}

#[test]
fn maps_are_cptp() {
    for (bath, t) in samples(47, 20) {
        let v = is_cptp(&dephasing_map(&family(bath, 4), t), 1e-10);
        assert!(v.cp && v.tp);
    }
}

#[test]
fn hierarchy_is_downward_closed() {
    for (bath, t) in samples(48, 80) {
        let scan = hierarchy_scan(&family(bath, 10), t, TOL).unwrap();
        assert!(scan.is_consistent());
        assert_eq!(scan.levels.len(), 9);
    }
}

#[test]
fn short_times_pass_every_level() {
    let bath = BathSpec::single_mode(1.0, 1.0, 10.0).unwrap();
    for &t in &[0.01, 0.05, 0.1] {
        let scan = hierarchy_scan(&family(bath.clone(), 12), t, TOL).unwrap();
        assert!(scan.levels.iter().all(|(_, v)| v.is_psd), "t={t}");
    }
}

#[test]
fn second_level_passes_while_third_fails() {
    let bath = BathSpec::single_mode(1.0, 1.0, 1.0).unwrap();
    let scan = hierarchy_scan(&family(bath.clone(), 3), 2.0, TOL).unwrap();
    assert!(scan.verdict(2).unwrap().is_psd);
    assert!(!scan.verdict(3).unwrap().is_psd);
    assert!(mu(&bath, 1, 2.0).re < 0.0);
}

#[test]
fn symbol_is_real_and_plateaus() {
    // a = e^{-40}: every μ_j is below 1e-16 in magnitude.
    let bath = BathSpec::single_mode(40.0, 1.0, 1.0).unwrap();
    let fam = family(bath, 2);
    let a = fourier_symbol(&fam, 0.7, 0.3, 5).unwrap();
    let b = fourier_symbol(&fam, 0.7, 0.3, 40).unwrap();
    assert!((a.value - b.value).norm() < 1e-13);
    for (bath, t) in samples(49, 10) {
        let s = fourier_symbol(&family(bath, 2), t, 1.1, 12).unwrap();
        assert!(s.value.im.abs() < 1e-12 * s.value.norm().max(1.0));
    }
}

#[test]
fn mu_series_has_zero_mean() {
    let bath = BathSpec::single_mode(1.0, 1.0, 10.0).unwrap();
    let fam = family(bath, 2);
    let n = 64;
    let mean: f64 = (0..n)
        .map(|i| fourier_symbol(&fam, 0.1, 2.0 * std::f64::consts::PI * i as f64 / n as f64, 10).unwrap().re)
        .sum::<f64>()
        / n as f64;
    assert!(mean.abs() < 1e-9);
}

#[test]
fn fejer_symbol_is_quadratic_form_of_section() {
    for (bath, t) in samples(50, 10) {
        let order = 6;
        let d = toeplitz_d_level(&bath, order + 2, t).unwrap();
        for &lambda in &[0.0, 0.9, 2.5, -1.3] {
            let v: Vec<_> = (0..=order).map(|a| c(0.0, -(a as f64) * lambda).exp()).collect();
            let dv = d.matvec(&v).unwrap();
            let quad: f64 = v.iter().zip(&dv).map(|(x, y)| (x.conj() * y).re).sum();
            let sym = toeplitz_symbol(&bath, t, lambda, order, SymbolWeighting::Fejer);
            assert!((sym - quad / (order + 1) as f64).abs() < 1e-10 * quad.abs().max(1.0));
        }
    }
}

#[test]
fn zero_time_generator_vanishes() {
    let bath = BathSpec::single_mode(1.0, 1.3, 2.0).unwrap();
    let d = toeplitz_d_level(&bath, 6, 0.0).unwrap();
    assert!(d.max_abs_diff(&ComplexMatrix::zeros(5, 5)) < 1e-13);
    for weighting in [SymbolWeighting::Dirichlet, SymbolWeighting::Fejer] {
        assert!(toeplitz_symbol(&bath, 0.0, 0.4, 8, weighting).abs() < 1e-12);
    }
    // The μ-series itself does not vanish at t = 0.
    let s = fourier_symbol(&family(bath, 2), 0.0, 0.4, 8).unwrap();
    assert!(s.re.abs() > 1e-3);
}
