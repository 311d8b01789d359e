#![allow(dead_code)]

use opendiv_core::canonical::GeneratorSpec;
use opendiv_core::dephasing::{BathMode, BathSpec};
use opendiv_core::matcore::{expm, herm_eig};
use opendiv_core::superop::Superoperator;
use opendiv_core::{ComplexMatrix, C64};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
}

pub fn hermitian(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    gaussian(rng, n, n).hermitize()
}

pub fn unitary(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    expm(&hermitian(rng, n).scale(C64::new(0.0, 1.0))).unwrap()
}

/// `m^{-1/2}` for a positive definite Hermitian `m`.
pub fn inv_sqrt(m: &ComplexMatrix) -> ComplexMatrix {
    let e = herm_eig(m).unwrap();
    let d: Vec<C64> = e.values.iter().map(|&x| C64::new(1.0 / x.sqrt(), 0.0)).collect();
    &(&e.vectors * &ComplexMatrix::diag(&d)) * &e.vectors.adjoint()
}

/// Random CPTP map with `rank` Kraus operators.
pub fn random_channel(rng: &mut impl Rng, n: usize, rank: usize) -> Superoperator {
    let raw: Vec<ComplexMatrix> = (0..rank).map(|_| gaussian(rng, n, n)).collect();
    let mut s = ComplexMatrix::zeros(n, n);
    for k in &raw {
        s = &s + &(&k.adjoint() * k);
    }
    let fix = inv_sqrt(&s);
    let kraus: Vec<ComplexMatrix> = raw.iter().map(|k| k * &fix).collect();
    Superoperator::from_kraus(&kraus).unwrap()
}

/// Random trace- and Hermiticity-preserving generator with rates of either sign.
pub fn random_generator(rng: &mut impl Rng, n: usize, channels: usize) -> GeneratorSpec {
    let h = hermitian(rng, n);
    let ch: Vec<(f64, ComplexMatrix)> = (0..channels).map(|_| (rng.random_range(-1.0..1.0), gaussian(rng, n, n).scale_real(0.5))).collect();
    GeneratorSpec::lindblad(n, Some(&h), &ch).unwrap()
}

pub fn random_bath(rng: &mut impl Rng) -> BathSpec {
    let modes = (0..rng.random_range(1..=3))
        .map(|_| BathMode { omega: rng.random_range(0.2..3.0), coupling: rng.random_range(-2.0..2.0) })
        .collect();
    BathSpec::new(modes, rng.random_range(0.2..5.0)).unwrap()
}

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}
