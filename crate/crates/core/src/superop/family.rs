use alloc::vec::Vec;

use super::{compress, is_cptp, trace_deviation, CptpVerdict, SubspaceSplit, Superoperator};
use crate::matcore::{inverse_with_condition, ComplexMatrix};
use crate::{Error, Result};

/// Condition-number estimate above which a map counts as singular.
pub const SINGULAR_CONDITION: f64 = 1e12;

/// Dynamical maps `E(t, 0)` sampled on an ascending grid starting at 0.
#[derive(Debug, Clone)]
pub struct MapFamily {
    dim: usize,
    times: Vec<f64>,
    maps: Vec<Superoperator>,
}

impl MapFamily {
    pub fn new(times: Vec<f64>, maps: Vec<Superoperator>) -> Result<Self> {
        if times.is_empty() || times.len() != maps.len() {
            return Err(Error::InvalidInput("a map family needs one map per grid time"));
        }
        if times[0] != 0.0 {
            return Err(Error::InvalidInput("map family grid must start at t = 0"));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidInput("map family grid must be strictly increasing"));
        }
        let dim = maps[0].dim();
        if let Some(bad) = maps.iter().find(|m| m.dim() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: bad.dim() });
        }
        if maps[0].max_abs_diff(&Superoperator::identity(dim)) > 1e-12 {
            return Err(Error::InvalidInput("the map at t = 0 must be the identity"));
        }
        Ok(Self { dim, times, maps })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn maps(&self) -> &[Superoperator] {
        &self.maps
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    /// The compressed family `P_aa E(t, 0) P_aa` on the `k`-level subspace.
    pub fn compress(&self, split: &SubspaceSplit) -> Result<Self> {
        let maps = self.maps.iter().map(|m| compress(m, split).map(|c| c.aa)).collect::<Result<Vec<_>>>()?;
        Ok(Self { dim: split.sub_dim(), times: self.times.clone(), maps })
    }

    /// `E'(t)(X) = U† E(t)(U X U†) U`; moves the subspace spanned by the
    /// columns of `U` onto the leading basis vectors.
    pub fn conjugate(&self, u: &ComplexMatrix) -> Result<Self> {
        let fwd = Superoperator::unitary(u)?;
        let back = Superoperator::unitary(&u.adjoint())?;
        let maps = self
            .maps
            .iter()
            .map(|m| back.compose(&m.compose(&fwd)?))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { dim: self.dim, times: self.times.clone(), maps })
    }
}

/// `Q(t2, t1) = E(t2, 0) E(t1, 0)⁻¹` for grid indices `i1 <= i2`.
pub fn intermediate_map(family: &MapFamily, i1: usize, i2: usize) -> Result<Superoperator> {
    let n = family.len();
    if i2 >= n {
        return Err(Error::IndexOutOfRange { index: i2, len: n });
    }
    if i1 > i2 {
        return Err(Error::InvalidInput("intermediate map needs i1 <= i2"));
    }
    if i1 == i2 {
        return Ok(Superoperator::identity(family.dim));
    }
    let (inv, condition) = inverse_with_condition(family.maps[i1].mat())?;
    if condition > SINGULAR_CONDITION {
        return Err(Error::SingularMap { time: family.times[i1], condition });
    }
    Superoperator::new(family.dim, family.maps[i2].mat() * &inv)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ScanMode {
    /// Check `Q(t_{i+1}, t_i)` for consecutive grid points.
    #[default]
    Consecutive,
    /// Check `Q(t_j, t_i)` for every `i < j`; quadratic in the grid size.
    Pairwise,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalVerdict {
    pub i1: usize,
    pub i2: usize,
    pub t1: f64,
    pub t2: f64,
    pub verdict: CptpVerdict,
}

impl IntervalVerdict {
    pub fn passes(&self) -> bool {
        self.verdict.cp && self.verdict.tp
    }
}

#[derive(Debug, Clone)]
pub struct DivisibilityScan {
    pub intervals: Vec<IntervalVerdict>,
    pub divisible: bool,
}

impl DivisibilityScan {
    /// First interval whose intermediate map is not CPTP.
    pub fn first_failure(&self) -> Option<&IntervalVerdict> {
        self.intervals.iter().find(|v| !v.passes())
    }
}

/// CPTP test of the intermediate maps on the grid.
pub fn divisibility_scan(family: &MapFamily, tol: f64, mode: ScanMode) -> Result<DivisibilityScan> {
    let n = family.len();
    let pairs: Vec<(usize, usize)> = match mode {
        ScanMode::Consecutive => (1..n).map(|i| (i - 1, i)).collect(),
        ScanMode::Pairwise => (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect(),
    };
    let mut intervals = Vec::with_capacity(pairs.len());
    for (i1, i2) in pairs {
        let q = intermediate_map(family, i1, i2)?;
        intervals.push(IntervalVerdict {
            i1,
            i2,
            t1: family.times[i1],
            t2: family.times[i2],
            verdict: is_cptp(&q, tol),
        });
    }
    let divisible = intervals.iter().all(IntervalVerdict::passes);
    Ok(DivisibilityScan { intervals, divisible })
}

/// `L_a` is invariant iff every compressed map is trace preserving and the
/// `pa` block vanishes (both within `tol`).
pub fn is_invariant_subspace(family: &MapFamily, split: &SubspaceSplit, tol: f64) -> Result<bool> {
    for m in &family.maps {
        let blocks = compress(m, split)?;
        if trace_deviation(&blocks.aa) > tol || blocks.pa.max_abs() > tol {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `||E_aa(t2) - Q_aa(t2, t1) E_aa(t1)||_max`, the part of `E_aa(t2)` carried
/// by `Q_a,a⊥ E_a⊥,a`. It vanishes for invariant splits.
pub fn composition_gap(family: &MapFamily, split: &SubspaceSplit, i1: usize, i2: usize) -> Result<f64> {
    let q = intermediate_map(family, i1, i2)?;
    let q_aa = compress(&q, split)?.aa;
    let e1 = compress(&family.maps[i1], split)?.aa;
    let e2 = compress(&family.maps[i2], split)?.aa;
    Ok(e2.max_abs_diff(&q_aa.compose(&e1)?))
}
