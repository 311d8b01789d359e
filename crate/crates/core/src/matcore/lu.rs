use alloc::vec::Vec;

use num_traits::Zero;

use super::{ComplexMatrix, C64};
use crate::{Error, Result};

/// LU factorization with partial pivoting, `P A = L U`.
#[derive(Debug, Clone)]
pub struct Lu {
    lu: ComplexMatrix,
    perm: Vec<usize>,
    singular: bool,
}

impl Lu {
    pub fn factor(a: &ComplexMatrix) -> Result<Self> {
        let n = a.ensure_square()?;
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut singular = false;
        for k in 0..n {
            let (piv, best) = (k..n)
                .map(|i| (i, lu[(i, k)].norm()))
                .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if best == 0.0 {
                singular = true;
                continue;
            }
            if piv != k {
                perm.swap(piv, k);
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(piv, j)];
                    lu[(piv, j)] = tmp;
                }
            }
            let d = lu[(k, k)];
            for i in k + 1..n {
                let f = lu[(i, k)] / d;
                lu[(i, k)] = f;
                if f.is_zero() {
                    continue;
                }
                for j in k + 1..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] -= f * u;
                }
            }
        }
        Ok(Self { lu, perm, singular })
    }

    pub fn is_singular(&self) -> bool {
        self.singular
    }

    fn solve_in_place(&self, b: &mut [C64]) {
        let n = self.lu.rows();
        let mut x: Vec<C64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut s = x[i];
            for j in 0..i {
                s -= self.lu[(i, j)] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..n {
                s -= self.lu[(i, j)] * x[j];
            }
            x[i] = s / self.lu[(i, i)];
        }
        b.copy_from_slice(&x);
    }

    /// Solves `A X = B`.
    pub fn solve(&self, b: &ComplexMatrix) -> Result<ComplexMatrix> {
        let n = self.lu.rows();
        if b.rows() != n {
            return Err(Error::DimensionMismatch { expected: n, found: b.rows() });
        }
        if self.singular {
            return Err(Error::SingularBlock { condition: f64::INFINITY });
        }
        let mut out = ComplexMatrix::zeros(n, b.cols());
        let mut col = Vec::with_capacity(n);
        for j in 0..b.cols() {
            col.clear();
            col.extend((0..n).map(|i| b[(i, j)]));
            self.solve_in_place(&mut col);
            for (i, &x) in col.iter().enumerate() {
                out[(i, j)] = x;
            }
        }
        Ok(out)
    }

    pub fn inverse(&self) -> Result<ComplexMatrix> {
        self.solve(&ComplexMatrix::identity(self.lu.rows()))
    }
}

/// Inverse together with the 1-norm condition number `||A||_1 ||A^-1||_1`.
/// A numerically singular matrix reports an infinite condition number.
pub(crate) fn inverse_with_condition(a: &ComplexMatrix) -> Result<(ComplexMatrix, f64)> {
    let lu = Lu::factor(a)?;
    if lu.is_singular() {
        return Ok((ComplexMatrix::identity(a.rows()), f64::INFINITY));
    }
    let inv = lu.inverse()?;
    let cond = a.norm_one() * inv.norm_one();
    Ok((inv, if cond.is_finite() { cond } else { f64::INFINITY }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_of_small_complex_matrix() {
        let a = ComplexMatrix::from_row_major(
            2,
            2,
            alloc::vec![C64::new(0.0, 1.0), C64::new(2.0, 0.0), C64::new(1.0, 0.0), C64::new(3.0, -1.0)],
        )
        .unwrap();
        let inv = Lu::factor(&a).unwrap().inverse().unwrap();
        assert!((&a * &inv).max_abs_diff(&ComplexMatrix::identity(2)) < 1e-14);
    }

    #[test]
    fn singular_is_reported() {
        let a = ComplexMatrix::from_real(2, 2, &[1.0, 2.0, 2.0, 4.0]).unwrap();
        let (_, cond) = inverse_with_condition(&a).unwrap();
        assert!(cond > 1e12);
    }
}
