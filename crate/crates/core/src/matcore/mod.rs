//! Dense complex linear algebra: the matrix type, Hermitian eigensolver,
//! PSD tests, LU solves and the matrix exponential.

mod eigen;
mod expm;
mod lu;
mod matrix;

pub use eigen::{herm_eig, herm_eigvals, psd_check, HermEigen, PsdVerdict};
pub use expm::expm;
pub use lu::Lu;
pub(crate) use lu::inverse_with_condition;
pub use matrix::{leading_principal_submatrix, ComplexMatrix};

pub type C64 = num_complex::Complex64;

/// Absolute Hermiticity tolerance for `a`: `1e-10 * max(1, ||a||_max)`.
pub fn herm_tol(a: &ComplexMatrix) -> f64 {
    1e-10 * a.max_abs().max(1.0)
}
