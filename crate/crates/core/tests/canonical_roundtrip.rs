mod common;

use common::*;
use opendiv_core::canonical::{
    canonical_form, canonical_form_in_basis, decoherence_matrix, decoherence_matrix_from_superop, gell_mann_basis,
    is_divisible_generator, OperatorBasis,
};
use opendiv_core::decay::{canonical_decay, DecayModelSpec};
use opendiv_core::matcore::{expm, psd_check};
use opendiv_core::{ComplexMatrix, C64};
use rand::Rng;

fn rotated_basis(rng: &mut impl Rng, k: usize) -> OperatorBasis {
    let gm = gell_mann_basis(k).unwrap();
    let m = k * k - 1;
    let a = ComplexMatrix::from_fn(m, m, |_, _| c(rng.random_range(-1.0..1.0), 0.0));
    let o = expm(&(&a - &a.transpose())).unwrap();
    let mut elements = vec![gm.elements()[0].clone()];
    for p in 0..m {
        let mut g = ComplexMatrix::zeros(k, k);
        for q in 0..m {
            g = &g + &gm.elements()[q + 1].scale_real(o[(q, p)].re);
        }
        elements.push(g.hermitize());
    }
    OperatorBasis::from_elements(k, elements).unwrap()
}

#[test]
fn gram_matrix_dimension_four() {
    let b = gell_mann_basis(4).unwrap();
    for (p, gp) in b.elements().iter().enumerate() {
        for (q, gq) in b.elements().iter().enumerate() {
            let expected = if p == q { 1.0 } else { 0.0 };
            assert!((gp.hs_inner(gq) - c(expected, 0.0)).norm() < 1e-12);
        }
    }
}

#[test]
fn round_trip_and_rate_verdicts() {
    let mut rng = rng(31);
    for trial in 0..50 {
        let n = 2 + trial % 4;
        let g = random_generator(&mut rng, n, 1 + trial % 3);
        let cf = canonical_form(&g).unwrap();
        let diff = cf.superoperator().unwrap().max_abs_diff(&g.superoperator());
        assert!(diff < 1e-9, "trial {trial}: {diff}");

        assert!(cf.hamiltonian.hermiticity_deviation() < 1e-10);
        for (p, lp) in cf.lindblad_ops.iter().enumerate() {
            assert!(lp.trace().norm() < 1e-10);
            for (q, lq) in cf.lindblad_ops.iter().enumerate() {
                let expected = if p == q { 1.0 } else { 0.0 };
                assert!((lp.hs_inner(lq) - c(expected, 0.0)).norm() < 1e-10);
            }
        }

        let d = decoherence_matrix(&g, &gell_mann_basis(n).unwrap()).unwrap();
        let by_rates = cf.rates.iter().all(|&r| r >= -1e-10 * d.mat.max_abs().max(1.0));
        assert_eq!(by_rates, psd_check(&d.mat, 1e-10).unwrap().is_psd);
        assert_eq!(by_rates, is_divisible_generator(&g, 1e-10).unwrap().is_psd);

        let sum: f64 = cf.rates.iter().sum();
        assert!((sum - d.mat.trace().re).abs() < 1e-10 * d.mat.max_abs().max(1.0));
    }
}

#[test]
fn rates_do_not_depend_on_basis() {
    let mut rng = rng(32);
    for n in 2..=4 {
        let g = random_generator(&mut rng, n, 2);
        let reference = canonical_form(&g).unwrap().rates;
        let other = canonical_form_in_basis(&g, &rotated_basis(&mut rng, n)).unwrap();
        for (a, b) in reference.iter().zip(&other.rates) {
            assert!((a - b).abs() < 1e-9);
        }
        assert!(other.superoperator().unwrap().max_abs_diff(&g.superoperator()) < 1e-9);
    }
}

#[test]
fn superoperator_path_agrees_with_terms() {
    let mut rng = rng(33);
    for n in 2..=5 {
        let g = random_generator(&mut rng, n, 3);
        let basis = gell_mann_basis(n).unwrap();
        let from_terms = decoherence_matrix(&g, &basis).unwrap();
        let from_superop = decoherence_matrix_from_superop(&g.superoperator(), &basis).unwrap();
        assert!(from_terms.mat.max_abs_diff(&from_superop.mat) < 1e-10);
    }
}

#[test]
fn decay_rates_are_populations_times_rates() {
    let n = 3;
    let rho2 = ComplexMatrix::diag(&[c(0.3, 0.0), c(0.7, 0.0), c(0.0, 0.0)]);
    let spec = DecayModelSpec::constant(n, vec![0.9, 1.6], vec![ComplexMatrix::ket_bra(n, 0, 0), rho2]).unwrap();
    let cf = canonical_form(&canonical_decay(&spec, 0.0).unwrap()).unwrap();
    let mut expected = vec![0.9, 0.3 * 1.6, 0.7 * 1.6];
    expected.resize(n * n - 1, 0.0);
    expected.sort_by(f64::total_cmp);
    for (a, b) in cf.rates.iter().zip(&expected) {
        assert!((a - b).abs() < 1e-10, "{:?}", cf.rates);
    }
}

#[test]
fn negative_dephasing_rate_is_flagged() {
    let sz = ComplexMatrix::diag(&[C64::new(1.0, 0.0), C64::new(-1.0, 0.0)]);
    for (gamma, expected) in [(0.5, true), (-0.5, false)] {
        let g = opendiv_core::canonical::GeneratorSpec::lindblad(2, None, &[(gamma / 2.0, sz.clone())]).unwrap();
        assert_eq!(is_divisible_generator(&g, 1e-10).unwrap().is_psd, expected);
    }
}
