use num_traits::Zero;

use super::Superoperator;
use crate::matcore::{herm_tol, psd_check, ComplexMatrix, PsdVerdict, C64};

/// Choi matrix `C[(i,k),(j,l)] = <i| S(|k><l|) |j>`, row index `i*d + k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiMatrix {
    pub dim: usize,
    pub mat: ComplexMatrix,
}

pub fn choi(s: &Superoperator) -> ChoiMatrix {
    let d = s.dim();
    let m = s.mat();
    let mat = ComplexMatrix::from_fn(d * d, d * d, |r, c| {
        let (i, k) = (r / d, r % d);
        let (j, l) = (c / d, c % d);
        m[(i + j * d, k + l * d)]
    });
    ChoiMatrix { dim: d, mat }
}

/// Complete positivity and trace preservation of a map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CptpVerdict {
    pub cp: bool,
    pub tp: bool,
    /// Smallest eigenvalue of the Choi matrix; NaN if it is not Hermitian.
    pub min_choi_eigenvalue: f64,
    /// `max_kl |Tr S(|k><l|) - δ_kl|`.
    pub trace_deviation: f64,
}

/// `max_kl |Tr S(|k><l|) - δ_kl|`.
pub fn trace_deviation(s: &Superoperator) -> f64 {
    let d = s.dim();
    let m = s.mat();
    let mut dev: f64 = 0.0;
    for k in 0..d {
        for l in 0..d {
            let tr: C64 = (0..d).map(|i| m[(i + i * d, k + l * d)]).sum();
            let target = if k == l { C64::new(1.0, 0.0) } else { C64::zero() };
            dev = dev.max((tr - target).norm());
        }
    }
    dev
}

/// CP via PSD-ness of the Choi matrix (relative `tol`), TP via
/// [`trace_deviation`] `<= tol`. A map whose Choi matrix is not Hermitian
/// does not preserve Hermiticity and is reported as not CP.
pub fn is_cptp(s: &Superoperator, tol: f64) -> CptpVerdict {
    let c = choi(s);
    let trace_deviation = trace_deviation(s);
    let tp = trace_deviation <= tol;
    if c.mat.hermiticity_deviation() > herm_tol(&c.mat) {
        return CptpVerdict { cp: false, tp, min_choi_eigenvalue: f64::NAN, trace_deviation };
    }
    let PsdVerdict { is_psd, min_eigenvalue, .. } =
        psd_check(&c.mat, tol).expect("Choi matrix is square and Hermitian");
    CptpVerdict { cp: is_psd, tp, min_choi_eigenvalue: min_eigenvalue, trace_deviation }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::herm_eigvals;

    #[test]
    fn identity_choi_is_scaled_bell_projector() {
        let c = choi(&Superoperator::identity(2));
        for r in 0..4 {
            for col in 0..4 {
                let expected = if r % 3 == 0 && col % 3 == 0 { 1.0 } else { 0.0 };
                assert_eq!(c.mat[(r, col)], C64::new(expected, 0.0));
            }
        }
        let ev = herm_eigvals(&c.mat).unwrap();
        assert!(ev[..3].iter().all(|x| x.abs() < 1e-14) && (ev[3] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn transpose_choi_is_swap() {
        let c = choi(&Superoperator::transpose_map(2));
        let swap = ComplexMatrix::from_fn(4, 4, |r, col| {
            let (i, k) = (r / 2, r % 2);
            C64::new(if col == k * 2 + i { 1.0 } else { 0.0 }, 0.0)
        });
        assert_eq!(c.mat, swap);
        let ev = herm_eigvals(&c.mat).unwrap();
        assert!((ev[0] + 1.0).abs() < 1e-14 && ev[1..].iter().all(|x| (x - 1.0).abs() < 1e-14));
        let v = is_cptp(&Superoperator::transpose_map(2), 1e-10);
        assert!(!v.cp && v.tp);
    }

    #[test]
    fn cptp_flags() {
        let v = is_cptp(&Superoperator::identity(3), 1e-10);
        assert!(v.cp && v.tp);
        let v = is_cptp(&Superoperator::identity(3).scale(0.5), 1e-10);
        assert!(v.cp && !v.tp);
        assert!((v.trace_deviation - 0.5).abs() < 1e-15);
    }
}
