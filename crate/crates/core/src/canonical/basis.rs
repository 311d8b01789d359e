use alloc::vec::Vec;

use crate::math::sqrt;
use crate::matcore::{ComplexMatrix, C64};
use crate::{Error, Result};

/// Orthonormal Hermitian operator basis `{G_p}` with `G_0 = I/√k`.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorBasis {
    dim: usize,
    elements: Vec<ComplexMatrix>,
}

impl OperatorBasis {
    /// Validates a user-supplied basis: `k²` Hermitian elements, `G_0 = I/√k`,
    /// `Tr[G_p G_q] = δ_pq` within `1e-10`.
    pub fn from_elements(dim: usize, elements: Vec<ComplexMatrix>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::DimensionTooSmall { dim, min: 2 });
        }
        if elements.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, found: elements.len() });
        }
        if let Some(g) = elements.iter().find(|g| g.rows() != dim || g.cols() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: g.rows() });
        }
        let g0 = ComplexMatrix::identity(dim).scale_real(1.0 / sqrt(dim as f64));
        if elements[0].max_abs_diff(&g0) > 1e-10 {
            return Err(Error::InvalidInput("first basis element must be I/sqrt(k)"));
        }
        if elements.iter().any(|g| g.hermiticity_deviation() > 1e-10) {
            return Err(Error::InvalidInput("basis elements must be Hermitian"));
        }
        for (p, gp) in elements.iter().enumerate() {
            for (q, gq) in elements.iter().enumerate().skip(p) {
                let target = if p == q { 1.0 } else { 0.0 };
                if (gp.hs_inner(gq) - C64::new(target, 0.0)).norm() > 1e-10 {
                    return Err(Error::InvalidInput("basis elements must be orthonormal"));
                }
            }
        }
        Ok(Self { dim, elements })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// Generalized Gell-Mann basis of a `k`-level space.
///
/// Order: `G_0 = I/√k`; the diagonal elements
/// `diag(1,…,1,-l,0,…,0)/√(l(l+1))` for `l = 1..k-1`; the symmetric
/// elements `(|m><n| + |n><m|)/√2`; the antisymmetric elements
/// `i(|m><n| - |n><m|)/√2`. Off-diagonal families run over `0 <= n < m < k`
/// sorted by `m`, then `n`.
pub fn gell_mann_basis(k: usize) -> Result<OperatorBasis> {
    if k < 2 {
        return Err(Error::DimensionTooSmall { dim: k, min: 2 });
    }
    let mut elements = Vec::with_capacity(k * k);
    elements.push(ComplexMatrix::identity(k).scale_real(1.0 / sqrt(k as f64)));
    for l in 1..k {
        let c = 1.0 / sqrt((l * (l + 1)) as f64);
        let mut g = ComplexMatrix::zeros(k, k);
        for i in 0..l {
            g[(i, i)] = C64::new(c, 0.0);
        }
        g[(l, l)] = C64::new(-(l as f64) * c, 0.0);
        elements.push(g);
    }
    let pairs: Vec<(usize, usize)> = (1..k).flat_map(|m| (0..m).map(move |n| (m, n))).collect();
    let r = 1.0 / sqrt(2.0);
    for &(m, n) in &pairs {
        let mut g = ComplexMatrix::zeros(k, k);
        g[(m, n)] = C64::new(r, 0.0);
        g[(n, m)] = C64::new(r, 0.0);
        elements.push(g);
    }
    for &(m, n) in &pairs {
        let mut g = ComplexMatrix::zeros(k, k);
        g[(m, n)] = C64::new(0.0, r);
        g[(n, m)] = C64::new(0.0, -r);
        elements.push(g);
    }
    Ok(OperatorBasis { dim: k, elements })
}
