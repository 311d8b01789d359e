//! Boson-boson pure-dephasing model.
//!
//! A bosonic mode coupled to a thermal bath through `λ_n b†b b_n†b_n` has
//! the reduced dynamics `ρ_mn -> ρ_mn e^{η((m-n)t)}` with
//!
//! ```text
//! η(t) = Σ_n ln[(1 - a_n) / (1 - a_n e^{-iλ_n t})],   a_n = e^{-ω_n/T}.
//! ```
//!
//! Every `L_k = span{|m><n| : m, n < k}` is invariant. The `k`-level
//! generator `ρ̇ = Σ_mn μ_{m-n}(t) |m><m| ρ |n><n|` with
//! `μ_j(t) = d/dt η(jt)` has a decoherence matrix whose only non-zero block
//! `d^B_k` (over the diagonal Gell-Mann elements) is congruent to the
//! Hermitian Toeplitz matrix `D_k = [T_{a-b}]`,
//! `T_j = -μ_{j+1} + 2μ_j - μ_{j-1}`, via `d^B_k = V_k D_k V_k†`.
//! Finite sections of one Toeplitz matrix nest, which makes the divisibility
//! conditions `D_2 >= 0, D_3 >= 0, ...` a hierarchy.

use alloc::vec::Vec;

use crate::canonical::{gell_mann_basis, GeneratorSpec};
use crate::math::{exp, ln, sin_cos, sqrt};
use crate::matcore::{leading_principal_submatrix, psd_check, ComplexMatrix, PsdVerdict, C64};
use crate::superop::{MapFamily, Superoperator};
use crate::{Error, Result, TimeGrid};

/// One bath mode: energy `omega > 0` and coupling `coupling` (real).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathMode {
    pub omega: f64,
    pub coupling: f64,
}

/// Discrete bosonic bath at temperature `T` (`ħ = k_B = 1`).
#[derive(Debug, Clone, PartialEq)]
pub struct BathSpec {
    modes: Vec<BathMode>,
    temperature: f64,
}

impl BathSpec {
    pub fn new(modes: Vec<BathMode>, temperature: f64) -> Result<Self> {
        if modes.is_empty() {
            return Err(Error::InvalidInput("bath needs at least one mode"));
        }
        if modes.iter().any(|m| !(m.omega > 0.0) || !m.omega.is_finite() || !m.coupling.is_finite()) {
            return Err(Error::InvalidInput("bath mode energies must be positive and couplings finite"));
        }
        if !(temperature > 0.0) || !temperature.is_finite() {
            return Err(Error::InvalidInput("bath temperature must be positive"));
        }
        Ok(Self { modes, temperature })
    }

    pub fn single_mode(omega: f64, coupling: f64, temperature: f64) -> Result<Self> {
        Self::new(alloc::vec![BathMode { omega, coupling }], temperature)
    }

    pub fn modes(&self) -> &[BathMode] {
        &self.modes
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    /// `(a_n, λ_n)` with `a_n = e^{-ω_n/T} < 1`.
    fn weights(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.modes.iter().map(move |m| (exp(-m.omega / self.temperature), m.coupling))
    }
}

fn phase(theta: f64) -> C64 {
    let (s, c) = sin_cos(theta);
    C64::new(c, s)
}

/// Dephasing function, a sum of per-mode principal-branch logarithms.
///
/// `|a_n e^{-iλt}| = a_n < 1` keeps each argument off the branch cut, so
/// the sum is continuous in `t`.
pub fn eta(bath: &BathSpec, t: f64) -> C64 {
    bath.weights()
        .map(|(a, lambda)| {
            let den = C64::new(1.0, 0.0) - phase(-lambda * t) * a;
            C64::new(ln(1.0 - a), 0.0) - den.ln()
        })
        .sum()
}

/// `μ_j(t) = d/dt η(jt) = Σ_n -i j λ_n z / (1 - z)`, `z = a_n e^{-iλ_n j t}`.
pub fn mu(bath: &BathSpec, j: i64, t: f64) -> C64 {
    if j == 0 {
        return C64::new(0.0, 0.0);
    }
    let jf = j as f64;
    bath.weights()
        .map(|(a, lambda)| {
            let z = phase(-lambda * jf * t) * a;
            C64::new(0.0, -jf * lambda) * z / (C64::new(1.0, 0.0) - z)
        })
        .sum()
}

/// Toeplitz coefficient `T_j = -μ_{j+1} + 2μ_j - μ_{j-1}`.
pub fn toeplitz_entry(bath: &BathSpec, j: i64, t: f64) -> C64 {
    mu(bath, j, t) * 2.0 - mu(bath, j + 1, t) - mu(bath, j - 1, t)
}

/// `(k-1) × (k-1)` Toeplitz matrix `D_k[a][b] = T_{a-b}`.
pub fn toeplitz_d_level(bath: &BathSpec, k: usize, t: f64) -> Result<ComplexMatrix> {
    if k < 2 {
        return Err(Error::DimensionTooSmall { dim: k, min: 2 });
    }
    let n = (k - 1) as i64;
    let coeffs: Vec<C64> = (-(n - 1)..n).map(|j| toeplitz_entry(bath, j, t)).collect();
    Ok(ComplexMatrix::from_fn(k - 1, k - 1, |a, b| coeffs[(a as i64 - b as i64 + n - 1) as usize]))
}

/// `V_k = diag(c_1..c_{k-1}) · (lower-triangular ones) · diag(1..k-1)` with
/// `c_l = 1/√(l(l+1))`.
pub fn congruence_v(k: usize) -> Result<ComplexMatrix> {
    if k < 2 {
        return Err(Error::DimensionTooSmall { dim: k, min: 2 });
    }
    Ok(ComplexMatrix::from_fn(k - 1, k - 1, |a, b| {
        if b <= a {
            let l = (a + 1) as f64;
            C64::new((b + 1) as f64 / sqrt(l * (l + 1.0)), 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    }))
}

/// Truncated pure-dephasing dynamics on `levels` number states.
#[derive(Debug, Clone)]
pub struct DephasingFamily {
    bath: BathSpec,
    levels: usize,
    grid: TimeGrid,
}

impl DephasingFamily {
    pub fn new(bath: BathSpec, levels: usize, grid: TimeGrid) -> Result<Self> {
        if levels < 2 {
            return Err(Error::DimensionTooSmall { dim: levels, min: 2 });
        }
        Ok(Self { bath, levels, grid })
    }

    pub fn bath(&self) -> &BathSpec {
        &self.bath
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    /// The same model truncated to `levels` states.
    pub fn with_levels(&self, levels: usize) -> Result<Self> {
        Self::new(self.bath.clone(), levels, self.grid.clone())
    }

    /// Superoperators on the grid; the grid must start at `t = 0`.
    pub fn map_family(&self) -> Result<MapFamily> {
        let maps = self.grid.times().iter().map(|&t| dephasing_map(self, t)).collect();
        MapFamily::new(self.grid.times().to_vec(), maps)
    }
}

/// `|m><n| -> e^{η((m-n)t)} |m><n|` on `fam.levels()` states.
pub fn dephasing_map(fam: &DephasingFamily, t: f64) -> Superoperator {
    let k = fam.levels;
    let kk = k as i64;
    let factors: Vec<C64> = (-(kk - 1)..kk).map(|j| eta(&fam.bath, j as f64 * t).exp()).collect();
    let mut mat = ComplexMatrix::zeros(k * k, k * k);
    for n in 0..k {
        for m in 0..k {
            let v = m + n * k;
            mat[(v, v)] = factors[(m as i64 - n as i64 + kk - 1) as usize];
        }
    }
    Superoperator::new(k, mat).expect("square by construction")
}

/// `ρ̇ = Σ_mn μ_{m-n}(t) |m><m| ρ |n><n|` on `fam.levels()` states.
pub fn dephasing_generator(fam: &DephasingFamily, t: f64) -> Result<GeneratorSpec> {
    let k = fam.levels;
    let mut terms = Vec::with_capacity(k * k);
    for m in 0..k {
        for n in 0..k {
            let w = mu(&fam.bath, m as i64 - n as i64, t);
            if w == C64::new(0.0, 0.0) {
                continue;
            }
            terms.push((ComplexMatrix::ket_bra(k, m, m).scale(w), ComplexMatrix::ket_bra(k, n, n)));
        }
    }
    GeneratorSpec::new(k, terms)
}

/// `d^B_k`: the decoherence matrix restricted to the diagonal Gell-Mann
/// elements, `d_pq = Σ_mn μ_{m-n} <m|G_p|m> <n|G_q|n>`.
pub fn decoherence_block(fam: &DephasingFamily, t: f64) -> ComplexMatrix {
    let k = fam.levels;
    let basis = gell_mann_basis(k).expect("levels >= 2");
    let diag: Vec<Vec<f64>> = basis.elements()[1..k].iter().map(|g| (0..k).map(|m| g[(m, m)].re).collect()).collect();
    let kk = k as i64;
    let mus: Vec<C64> = (-(kk - 1)..kk).map(|j| mu(&fam.bath, j, t)).collect();
    let d = ComplexMatrix::from_fn(k - 1, k - 1, |p, q| {
        let mut acc = C64::new(0.0, 0.0);
        for m in 0..k {
            for n in 0..k {
                acc += mus[(m as i64 - n as i64 + kk - 1) as usize] * (diag[p][m] * diag[q][n]);
            }
        }
        acc
    });
    d.hermitize()
}

/// `D_k` for the family's truncation level.
pub fn toeplitz_d(fam: &DephasingFamily, t: f64) -> ComplexMatrix {
    toeplitz_d_level(&fam.bath, fam.levels, t).expect("levels >= 2")
}

/// Per-level PSD verdicts of `D_2(t), ..., D_k(t)`.
#[derive(Debug, Clone)]
pub struct HierarchyScan {
    pub time: f64,
    /// `(level j, verdict for D_j)`, `j = 2..=k`.
    pub levels: Vec<(usize, PsdVerdict)>,
}

impl HierarchyScan {
    /// True when the passing levels are downward closed.
    pub fn is_consistent(&self) -> bool {
        is_downward_closed(self.levels.iter().map(|(_, v)| v.is_psd))
    }

    pub fn verdict(&self, level: usize) -> Option<&PsdVerdict> {
        self.levels.iter().find(|(j, _)| *j == level).map(|(_, v)| v)
    }
}

/// `true` iff no `true` follows a `false`.
pub fn is_downward_closed(flags: impl IntoIterator<Item = bool>) -> bool {
    let mut failed = false;
    for f in flags {
        if f && failed {
            return false;
        }
        failed |= !f;
    }
    true
}

pub fn hierarchy_scan(fam: &DephasingFamily, t: f64, tol: f64) -> Result<HierarchyScan> {
    let d = toeplitz_d(fam, t);
    let levels = (2..=fam.levels)
        .map(|j| Ok((j, psd_check(&leading_principal_submatrix(&d, j - 1)?, tol)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(HierarchyScan { time: t, levels })
}

/// Partial sum `Σ_{j=-K}^{K} μ_j(t) e^{ijλ}` and its real part.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymbolValue {
    pub re: f64,
    pub value: C64,
}

/// Truncated series `Σ_{|j| <= K} μ_j(t) e^{ijλ}`.
///
/// `μ_{-j} = μ_j*` makes every symmetric partial sum real. Since `μ_0 = 0`
/// the series has zero mean over `λ`; positivity questions about `D_∞` are
/// better posed through [`toeplitz_symbol`].
pub fn fourier_symbol(fam: &DephasingFamily, t: f64, lambda: f64, order: usize) -> Result<SymbolValue> {
    if order == 0 {
        return Err(Error::InvalidInput("symbol order must be at least 1"));
    }
    let k = order as i64;
    let value: C64 = (-k..=k).map(|j| mu(&fam.bath, j, t) * phase(j as f64 * lambda)).sum();
    Ok(SymbolValue { re: value.re, value })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymbolWeighting {
    /// Plain partial sum.
    Dirichlet,
    /// Cesàro mean, weights `1 - |j|/(K+1)`.
    Fejer,
}

/// Partial symbol `Σ_{|j| <= K} w_j T_j(t) e^{ijλ}` of the Toeplitz matrix
/// `D_∞(t)`.
///
/// The Fejér mean equals `v† D_{K+2} v / (K+1)` with `v_a = e^{-iaλ}`, so it
/// is non-negative whenever `D_{K+2}` is PSD.
pub fn toeplitz_symbol(bath: &BathSpec, t: f64, lambda: f64, order: usize, weighting: SymbolWeighting) -> f64 {
    let k = order as i64;
    (-k..=k)
        .map(|j| {
            let w = match weighting {
                SymbolWeighting::Dirichlet => 1.0,
                SymbolWeighting::Fejer => 1.0 - j.unsigned_abs() as f64 / (order + 1) as f64,
            };
            (toeplitz_entry(bath, j, t) * phase(j as f64 * lambda)).re * w
        })
        .sum()
}

/// Minimum of [`toeplitz_symbol`] over `points` equally spaced `λ ∈ [-π, π]`,
/// returned as `(λ, value)`.
pub fn toeplitz_symbol_min(bath: &BathSpec, t: f64, order: usize, weighting: SymbolWeighting, points: usize) -> (f64, f64) {
    let k = order as i64;
    let coeffs: Vec<(f64, C64)> = (-k..=k)
        .map(|j| {
            let w = match weighting {
                SymbolWeighting::Dirichlet => 1.0,
                SymbolWeighting::Fejer => 1.0 - j.unsigned_abs() as f64 / (order + 1) as f64,
            };
            (j as f64, toeplitz_entry(bath, j, t) * w)
        })
        .collect();
    let points = points.max(2);
    let mut best = (0.0, f64::INFINITY);
    for i in 0..points {
        let lambda = -core::f64::consts::PI + 2.0 * core::f64::consts::PI * i as f64 / (points - 1) as f64;
        let v: f64 = coeffs.iter().map(|&(j, c)| (c * phase(j * lambda)).re).sum();
        if v < best.1 {
            best = (lambda, v);
        }
    }
    best
}
