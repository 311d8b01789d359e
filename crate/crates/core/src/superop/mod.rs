//! Superoperators on column-stacked operators.
//!
//! `vec(X)[i + j*d] = X[i][j]`, so the map `X -> A X B` is the matrix
//! `Bᵀ ⊗ A`. Every index formula in this module is written against that
//! convention.

mod choi;
mod family;
mod split;

pub use choi::{choi, is_cptp, trace_deviation, ChoiMatrix, CptpVerdict};
pub use family::{
    divisibility_scan, intermediate_map, is_invariant_subspace, composition_gap, DivisibilityScan,
    IntervalVerdict, MapFamily, ScanMode, SINGULAR_CONDITION,
};
pub use split::{block_inverse, compress, Compression, SubspaceSplit};

use alloc::vec::Vec;

use crate::matcore::{ComplexMatrix, C64};
use crate::{Error, Result};

/// Linear map on `d × d` operators, stored as a `d² × d²` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Superoperator {
    dim: usize,
    mat: ComplexMatrix,
}

impl Superoperator {
    pub fn new(dim: usize, mat: ComplexMatrix) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("superoperator dimension must be positive"));
        }
        let side = mat.ensure_square()?;
        if side != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, found: side });
        }
        Ok(Self { dim, mat })
    }

    pub fn identity(dim: usize) -> Self {
        Self { dim, mat: ComplexMatrix::identity(dim * dim) }
    }

    pub fn zero(dim: usize) -> Self {
        Self { dim, mat: ComplexMatrix::zeros(dim * dim, dim * dim) }
    }

    /// `X -> A X B`.
    pub fn sandwich(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Self> {
        let d = a.ensure_square()?;
        if b.rows() != d || b.cols() != d {
            return Err(Error::DimensionMismatch { expected: d, found: b.rows() });
        }
        Self::new(d, b.transpose().kron(a))
    }

    /// `X -> Σ K X K†`.
    pub fn from_kraus(ops: &[ComplexMatrix]) -> Result<Self> {
        let first = ops.first().ok_or(Error::InvalidInput("empty Kraus set"))?;
        let d = first.ensure_square()?;
        let mut mat = ComplexMatrix::zeros(d * d, d * d);
        for k in ops {
            if k.rows() != d || k.cols() != d {
                return Err(Error::DimensionMismatch { expected: d, found: k.rows() });
            }
            mat = &mat + &k.conj().kron(k);
        }
        Self::new(d, mat)
    }

    /// `X -> U X U†`.
    pub fn unitary(u: &ComplexMatrix) -> Result<Self> {
        Self::from_kraus(core::slice::from_ref(u))
    }

    /// `X -> Xᵀ`, positive but not completely positive.
    pub fn transpose_map(dim: usize) -> Self {
        let mut mat = ComplexMatrix::zeros(dim * dim, dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                mat[(i + j * dim, j + i * dim)] = C64::new(1.0, 0.0);
            }
        }
        Self { dim, mat }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn mat(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_mat(self) -> ComplexMatrix {
        self.mat
    }

    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        if x.rows() != self.dim || x.cols() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: x.rows() });
        }
        Ok(unvectorize(&self.mat.matvec(&vectorize(x))?, self.dim))
    }

    /// `self ∘ inner`: apply `inner` first.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if self.dim != inner.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: inner.dim });
        }
        Ok(Self { dim: self.dim, mat: self.mat.matmul(&inner.mat)? })
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { dim: self.dim, mat: self.mat.scale_real(s) }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        Ok(Self { dim: self.dim, mat: &self.mat + &other.mat })
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.mat.max_abs_diff(&other.mat)
    }

    /// Largest `||S(X†) - S(X)†||_max` over the matrix units `X = |k><l|`.
    pub fn hermiticity_preservation_deviation(&self) -> f64 {
        let d = self.dim;
        let mut dev: f64 = 0.0;
        for k in 0..d {
            for l in 0..d {
                let a = unvectorize(&self.mat.column(k + l * d), d);
                let b = unvectorize(&self.mat.column(l + k * d), d);
                dev = dev.max(b.max_abs_diff(&a.adjoint()));
            }
        }
        dev
    }
}

/// Column-stacked vector of `x`.
pub fn vectorize(x: &ComplexMatrix) -> Vec<C64> {
    let (r, c) = (x.rows(), x.cols());
    let mut v = Vec::with_capacity(r * c);
    for j in 0..c {
        for i in 0..r {
            v.push(x[(i, j)]);
        }
    }
    v
}

/// Inverse of [`vectorize`] for a `dim × dim` operator.
pub fn unvectorize(v: &[C64], dim: usize) -> ComplexMatrix {
    assert_eq!(v.len(), dim * dim, "vector length must be dim²");
    ComplexMatrix::from_fn(dim, dim, |i, j| v[i + j * dim])
}
