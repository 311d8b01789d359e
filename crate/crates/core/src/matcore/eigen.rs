use alloc::vec::Vec;

use super::{herm_tol, ComplexMatrix, C64};
use crate::math::{hypot, sqrt};
use crate::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Eigenpairs of a Hermitian matrix, eigenvalues ascending.
///
/// Column `i` of `vectors` is the unit eigenvector belonging to `values[i]`.
#[derive(Debug, Clone)]
pub struct HermEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

/// Outcome of a positive-semidefiniteness test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsdVerdict {
    pub is_psd: bool,
    pub min_eigenvalue: f64,
    pub tolerance_used: f64,
}

impl PsdVerdict {
    pub fn from_eigenvalues(values: &[f64], tol: f64) -> Self {
        let min_eigenvalue = values.iter().copied().fold(f64::INFINITY, f64::min);
        let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let tolerance_used = tol * scale.max(1.0);
        Self { is_psd: min_eigenvalue >= -tolerance_used, min_eigenvalue, tolerance_used }
    }
}

fn checked_hermitian(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.ensure_square()?;
    let tol = herm_tol(a);
    let deviation = a.hermiticity_deviation();
    if deviation > tol {
        return Err(Error::NotHermitian { deviation, tol });
    }
    Ok(a.hermitize())
}

/// Eigenvalues of `(A + A†)/2`, ascending.
pub fn herm_eigvals(a: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(jacobi(checked_hermitian(a)?, false).values)
}

/// Eigenvalues and eigenvectors of `(A + A†)/2`.
pub fn herm_eig(a: &ComplexMatrix) -> Result<HermEigen> {
    Ok(jacobi(checked_hermitian(a)?, true))
}

/// PSD test with relative tolerance `tol * max(1, max |λ|)`.
pub fn psd_check(a: &ComplexMatrix, tol: f64) -> Result<PsdVerdict> {
    Ok(PsdVerdict::from_eigenvalues(&herm_eigvals(a)?, tol))
}

/// Cyclic complex Jacobi. Each rotation first removes the phase of the pivot
/// and then applies the real symmetric Jacobi rotation.
fn jacobi(mut a: ComplexMatrix, want_vectors: bool) -> HermEigen {
    let n = a.rows();
    let mut v = ComplexMatrix::identity(if want_vectors { n } else { 1 });
    let total = a.frobenius();
    let eps = f64::EPSILON * f64::EPSILON * total * total;

    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += a[(p, q)].norm_sqr();
            }
        }
        if off <= eps || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let g = a[(p, q)];
                let h = g.norm();
                if h == 0.0 || h * h <= eps / ((n * n) as f64) {
                    continue;
                }
                let phase = g / h; // e^{iφ}
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let zeta = (aqq - app) / (2.0 * h);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + hypot(1.0, zeta))
                } else {
                    -1.0 / (-zeta + hypot(1.0, zeta))
                };
                let c = 1.0 / sqrt(1.0 + t * t);
                let s = t * c;
                let pc = phase.conj(); // e^{-iφ}

                // A <- A J
                for i in 0..n {
                    let aip = a[(i, p)];
                    let aiq = a[(i, q)];
                    a[(i, p)] = aip * c - aiq * pc * s;
                    a[(i, q)] = aip * s + aiq * pc * c;
                }
                // A <- J† A
                for j in 0..n {
                    let apj = a[(p, j)];
                    let aqj = a[(q, j)];
                    a[(p, j)] = apj * c - aqj * phase * s;
                    a[(q, j)] = apj * s + aqj * phase * c;
                }
                a[(p, q)] = C64::new(0.0, 0.0);
                a[(q, p)] = C64::new(0.0, 0.0);
                a[(p, p)] = C64::new(app - t * h, 0.0);
                a[(q, q)] = C64::new(aqq + t * h, 0.0);

                if want_vectors {
                    for i in 0..n {
                        let vip = v[(i, p)];
                        let viq = v[(i, q)];
                        v[(i, p)] = vip * c - viq * pc * s;
                        v[(i, q)] = vip * s + viq * pc * c;
                    }
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = if want_vectors {
        ComplexMatrix::from_fn(n, n, |r, c| v[(r, order[c])])
    } else {
        v
    };
    HermEigen { values, vectors }
}
