use alloc::vec::Vec;

use super::Superoperator;
use crate::matcore::{inverse_with_condition, ComplexMatrix};
use crate::superop::family::SINGULAR_CONDITION;
use crate::{Error, Result};

/// `H = H_a ⊕ H_b` with `H_a` spanned by the first `sub_dim` basis vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubspaceSplit {
    total_dim: usize,
    sub_dim: usize,
}

impl SubspaceSplit {
    pub fn new(total_dim: usize, sub_dim: usize) -> Result<Self> {
        if sub_dim == 0 || sub_dim >= total_dim {
            return Err(Error::InvalidInput("subspace dimension must satisfy 1 <= k < N"));
        }
        Ok(Self { total_dim, sub_dim })
    }

    pub fn total_dim(&self) -> usize {
        self.total_dim
    }

    pub fn sub_dim(&self) -> usize {
        self.sub_dim
    }

    /// Vectorized indices of `|m><n|`, `m, n < k`, in the column-stacked
    /// order of a standalone `k`-level operator.
    pub fn inner_indices(&self) -> Vec<usize> {
        let (n, k) = (self.total_dim, self.sub_dim);
        (0..k).flat_map(|col| (0..k).map(move |row| row + col * n)).collect()
    }

    /// Remaining vectorized indices, ascending.
    pub fn outer_indices(&self) -> Vec<usize> {
        let (n, k) = (self.total_dim, self.sub_dim);
        (0..n * n).filter(|&v| v % n >= k || v / n >= k).collect()
    }
}

/// Blocks of a superoperator relative to `L_a ⊕ L_a⊥`.
///
/// `ap` maps `L_a⊥` into `L_a`, `pa` maps `L_a` into `L_a⊥`. Rows and
/// columns of the off-diagonal and `pp` blocks follow
/// [`SubspaceSplit::inner_indices`] and [`SubspaceSplit::outer_indices`].
#[derive(Debug, Clone)]
pub struct Compression {
    pub aa: Superoperator,
    pub ap: ComplexMatrix,
    pub pa: ComplexMatrix,
    pub pp: ComplexMatrix,
}

pub fn compress(s: &Superoperator, split: &SubspaceSplit) -> Result<Compression> {
    if s.dim() != split.total_dim {
        return Err(Error::DimensionMismatch { expected: split.total_dim, found: s.dim() });
    }
    let inner = split.inner_indices();
    let outer = split.outer_indices();
    let m = s.mat();
    Ok(Compression {
        aa: Superoperator::new(split.sub_dim, m.select(&inner, &inner))?,
        ap: m.select(&inner, &outer),
        pa: m.select(&outer, &inner),
        pp: m.select(&outer, &outer),
    })
}

/// Inverse of a map with vanishing `pa` block:
/// `S⁻¹ = S_aa⁻¹ - S_aa⁻¹ S_ap S_pp⁻¹ + S_pp⁻¹`, assembled on the full space.
pub fn block_inverse(s: &Superoperator, split: &SubspaceSplit) -> Result<Superoperator> {
    let blocks = compress(s, split)?;
    let residual = blocks.pa.max_abs();
    if residual > 1e-10 * s.mat().max_abs().max(1.0) {
        return Err(Error::NotBlockTriangular { residual });
    }
    let (aa_inv, cond_a) = inverse_with_condition(blocks.aa.mat())?;
    let (pp_inv, cond_p) = inverse_with_condition(&blocks.pp)?;
    let condition = cond_a.max(cond_p);
    if condition > SINGULAR_CONDITION {
        return Err(Error::SingularBlock { condition });
    }
    let off = -&(&(&aa_inv * &blocks.ap) * &pp_inv);

    let inner = split.inner_indices();
    let outer = split.outer_indices();
    let n2 = s.dim() * s.dim();
    let mut inv = ComplexMatrix::zeros(n2, n2);
    for (a, &r) in inner.iter().enumerate() {
        for (b, &c) in inner.iter().enumerate() {
            inv[(r, c)] = aa_inv[(a, b)];
        }
        for (b, &c) in outer.iter().enumerate() {
            inv[(r, c)] = off[(a, b)];
        }
    }
    for (a, &r) in outer.iter().enumerate() {
        for (b, &c) in outer.iter().enumerate() {
            inv[(r, c)] = pp_inv[(a, b)];
        }
    }
    let check = (s.mat() * &inv).max_abs_diff(&ComplexMatrix::identity(n2));
    if check > 1e-8 {
        return Err(Error::SingularBlock { condition });
    }
    Superoperator::new(s.dim(), inv)
}
