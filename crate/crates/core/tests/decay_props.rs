mod common;

use common::*;
use opendiv_core::canonical::is_divisible_generator;
use opendiv_core::decay::*;
use opendiv_core::matcore::herm_eigvals;
use opendiv_core::superop::{divisibility_scan, ScanMode, SubspaceSplit};
use opendiv_core::{ComplexMatrix, TimeGrid, C64};
use rand::Rng;

fn embed(b: &ComplexMatrix, n: usize) -> ComplexMatrix {
    let k = b.rows();
    ComplexMatrix::from_fn(n, n, |r, c| if r < k && c < k { b[(r, c)] } else { C64::new(0.0, 0.0) })
}

fn random_density(rng: &mut impl Rng, k: usize, n: usize) -> ComplexMatrix {
    let g = gaussian(rng, k, k);
    let rho = &g * &g.adjoint();
    let tr = rho.trace().re;
    embed(&rho.scale_real(1.0 / tr).hermitize(), n)
}

/// Spectrum `{1/2, 1/2, 0, ...}` (or `I/k` for `k = 1, 2`) in a random eigenbasis.
fn degenerate_density(rng: &mut impl Rng, k: usize, n: usize) -> ComplexMatrix {
    let u = unitary(rng, k);
    let m = k.min(2);
    let d: Vec<C64> = (0..k).map(|i| c(if i < m { 1.0 / m as f64 } else { 0.0 }, 0.0)).collect();
    embed(&(&(&u * &ComplexMatrix::diag(&d)) * &u.adjoint()).hermitize(), n)
}

fn random_spec(rng: &mut impl Rng, n: usize, samples: usize, degenerate: bool) -> DecayModelSpec {
    let times: Vec<f64> = (0..samples).map(|i| i as f64 * 0.5).collect();
    let rates = (1..n).map(|_| (0..samples).map(|_| rng.random_range(-1.0..2.0)).collect()).collect();
    let targets = (1..n)
        .map(|k| {
            (0..samples)
                .map(|_| if degenerate { degenerate_density(rng, k, n) } else { random_density(rng, k, n) })
                .collect()
        })
        .collect();
    DecayModelSpec::new(n, times, rates, targets).unwrap()
}

#[test]
fn defining_and_canonical_forms_agree() {
    let mut rng = rng(51);
    let mut checked = 0;
    for trial in 0..12 {
        let n = 2 + trial % 4;
        let spec = random_spec(&mut rng, n, 3, trial % 2 == 0);
        for &t in &[0.0, 0.37, 0.5, 0.81] {
            let a = decay_generator(&spec, t).unwrap().superoperator();
            let b = canonical_decay(&spec, t).unwrap().superoperator();
            assert!(a.max_abs_diff(&b) <= 1e-12, "trial {trial} t={t}: {}", a.max_abs_diff(&b));
            checked += 1;
        }
    }
    assert!(checked >= 20);
}

#[test]
fn pure_target_gives_one_jump_per_level() {
    let spec = DecayModelSpec::ground_feeding(4, vec![1.0, 2.0, 3.0]).unwrap();
    // Three terms per jump operator, one jump operator per level.
    assert_eq!(canonical_decay(&spec, 0.0).unwrap().terms().len(), 3 * 3);
}

#[test]
fn zero_rates_give_zero_generator_and_constant_trajectory() {
    let mut rng = rng(52);
    let targets = (1..3).map(|k| random_density(&mut rng, k, 3)).collect();
    let spec = DecayModelSpec::constant(3, vec![0.0, 0.0], targets).unwrap();
    let l = decay_generator(&spec, 0.0).unwrap().superoperator();
    assert_eq!(l.mat().max_abs(), 0.0);
    let rho0 = random_density(&mut rng, 3, 3);
    let prop = propagate(&spec, &rho0, &TimeGrid::uniform(0.0, 2.0, 10).unwrap()).unwrap();
    assert!(prop.states.iter().all(|s| s.max_abs_diff(&rho0) < 1e-15));
}

#[test]
fn rate_signs_decide_generator_divisibility() {
    let mut rng = rng(53);
    for trial in 0..20 {
        let spec = random_spec(&mut rng, 2 + trial % 3, 2, false);
        for &t in &[0.0, 0.2, 0.5] {
            let by_rates = spec.rates_nonnegative(t, 1e-12).unwrap();
            let verdict = is_divisible_generator(&decay_generator(&spec, t).unwrap(), 1e-10).unwrap();
            assert_eq!(by_rates, verdict.is_psd, "trial {trial} t={t} rates {:?}", spec.rates_at(t).unwrap());
        }
    }
}

#[test]
fn two_level_population_decays_exponentially() {
    let gamma = 0.8;
    let spec = DecayModelSpec::ground_feeding(2, vec![gamma]).unwrap();
    let grid = TimeGrid::uniform(0.0, 5.0 / gamma, 500).unwrap();
    let cascade = cascade_probs(&spec, &CascadeState::level(2, 1), &grid).unwrap();
    let prop = propagate(&spec, &ComplexMatrix::ket_bra(2, 1, 1), &grid).unwrap();
    for ((&t, p), rho) in grid.times().iter().zip(&cascade).zip(&prop.states) {
        let exact = (-gamma * t).exp();
        assert!((p.probs[1] - exact).abs() <= 1e-6);
        assert!((rho[(1, 1)].re - exact).abs() <= 1e-6);
    }
}

#[test]
fn cascade_matches_propagated_diagonal() {
    let mut rng = rng(54);
    for n in [3, 4] {
        let rates: Vec<f64> = (1..n).map(|_| rng.random_range(0.2..1.5)).collect();
        let targets = (1..n).map(|k| random_density(&mut rng, k, n)).collect();
        let spec = DecayModelSpec::constant(n, rates, targets).unwrap();
        let grid = TimeGrid::uniform(0.0, 4.0, 400).unwrap();
        let rho0 = random_density(&mut rng, n, n);
        let p0 = CascadeState::new((0..n).map(|i| rho0[(i, i)].re).collect()).unwrap();
        let cascade = cascade_probs(&spec, &p0, &grid).unwrap();
        let prop = propagate(&spec, &rho0, &grid).unwrap();
        for (p, rho) in cascade.iter().zip(&prop.states) {
            for i in 0..n {
                assert!((p.probs[i] - rho[(i, i)].re).abs() <= 1e-8);
            }
            assert!((p.total() - 1.0).abs() < 1e-9);
        }
    }
}

#[test]
fn time_dependent_cascade_matches_propagation() {
    let mut rng = rng(55);
    let spec = random_spec(&mut rng, 3, 5, false);
    let grid = TimeGrid::uniform(0.0, 2.0, 800).unwrap();
    let rho0 = random_density(&mut rng, 3, 3);
    let p0 = CascadeState::new((0..3).map(|i| rho0[(i, i)].re).collect()).unwrap();
    let cascade = cascade_probs(&spec, &p0, &grid).unwrap();
    let prop = propagate(&spec, &rho0, &grid).unwrap();
    let err = cascade
        .iter()
        .zip(&prop.states)
        .flat_map(|(p, rho)| (0..3).map(move |i| (p.probs[i] - rho[(i, i)].re).abs()))
        .fold(0.0, f64::max);
    // Both integrators are second order across the kinks of the interpolated data.
    assert!(err < 1e-5, "{err}");
}

#[test]
fn cascade_rhs_conserves_probability() {
    let mut rng = rng(56);
    for _ in 0..20 {
        let spec = random_spec(&mut rng, 4, 3, false);
        let p: Vec<f64> = (0..4).map(|_| rng.random_range(0.0..1.0)).collect();
        let t = rng.random_range(0.0..1.0);
        let total: f64 = cascade_rhs(&spec, t, &p).unwrap().iter().sum();
        assert!(total.abs() < 1e-12);
    }
}

#[test]
fn trace_positivity_and_support() {
    let mut rng = rng(57);
    let n = 4;
    let rates: Vec<f64> = (1..n).map(|_| rng.random_range(0.1..1.0)).collect();
    let targets = (1..n).map(|k| random_density(&mut rng, k, n)).collect();
    let spec = DecayModelSpec::constant(n, rates, targets).unwrap();
    let grid = TimeGrid::uniform(0.0, 3.0, 60).unwrap();
    for k in 1..=n {
        let rho0 = random_density(&mut rng, k, n);
        let prop = propagate(&spec, &rho0, &grid).unwrap();
        for (&t, rho) in grid.times().iter().zip(&prop.states) {
            assert!((rho.trace().re - 1.0).abs() <= 1e-9 * t.max(1.0));
            assert!(herm_eigvals(&rho.hermitize()).unwrap()[0] >= -1e-8);
            for r in 0..n {
                for c in 0..n {
                    if r >= k || c >= k {
                        assert!(rho[(r, c)].norm() <= 1e-9);
                    }
                }
            }
        }
    }
}

#[test]
fn subdynamics_generators() {
    let mut rng = rng(58);
    let spec = random_spec(&mut rng, 4, 2, false);
    for &t in &[0.0, 0.3] {
        let full = decay_generator(&spec, t).unwrap().superoperator();
        let sub = subdynamics_generator(&spec, 4, t).unwrap().superoperator();
        assert!(full.max_abs_diff(&sub) < 1e-12);
    }

    // γ_3 < 0 < γ_1, γ_2: the three-level subdynamics is divisible, the full one is not.
    let targets = (1..4).map(|k| random_density(&mut rng, k, 4)).collect();
    let spec = DecayModelSpec::constant(4, vec![0.5, 0.7, -0.3], targets).unwrap();
    assert!(is_divisible_generator(&subdynamics_generator(&spec, 3, 0.0).unwrap(), 1e-10).unwrap().is_psd);
    assert!(!is_divisible_generator(&decay_generator(&spec, 0.0).unwrap(), 1e-10).unwrap().is_psd);
}

#[test]
fn compressed_family_equals_propagated_subdynamics() {
    let mut rng = rng(59);
    let n = 4;
    let spec = random_spec(&mut rng, n, 4, false);
    let grid = TimeGrid::uniform(0.0, 1.5, 60).unwrap();
    let full = propagate(&spec, &ComplexMatrix::ket_bra(n, 0, 0), &grid).unwrap().family;
    for k in 2..n {
        let compressed = full.compress(&SubspaceSplit::new(n, k).unwrap()).unwrap();
        let direct = propagate_generator(k, &grid, |t| subdynamics_generator(&spec, k, t)).unwrap();
        for (a, b) in compressed.maps().iter().zip(direct.maps()) {
            assert!(a.max_abs_diff(b) <= 1e-8);
        }
    }
}

#[test]
fn positive_rates_give_divisible_families_at_every_level() {
    let spec = DecayModelSpec::ground_feeding(4, vec![0.6, 1.1, 0.9]).unwrap();
    let grid = TimeGrid::uniform(0.0, 3.0, 30).unwrap();
    let fam = propagate(&spec, &ComplexMatrix::ket_bra(4, 3, 3), &grid).unwrap().family;
    assert!(divisibility_scan(&fam, 1e-9, ScanMode::Consecutive).unwrap().divisible);
    for k in 2..4 {
        let sub = fam.compress(&SubspaceSplit::new(4, k).unwrap()).unwrap();
        assert!(divisibility_scan(&sub, 1e-9, ScanMode::Consecutive).unwrap().divisible);
    }
}
