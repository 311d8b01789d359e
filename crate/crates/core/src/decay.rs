//! N-level decay model with possibly negative rates.
//!
//! ```text
//! ρ̇ = Σ_{k=1}^{N-1} γ_k (-½{|k><k|, ρ} + <k|ρ|k> ρ^(k))
//! ```
//!
//! where `ρ^(k)` is a density matrix supported on the first `k` levels.
//! Writing `ρ^(k) = Σ_j p_j |k_j><k_j|` turns this into a canonical form with
//! jump operators `|k_j><k|` and rates `p_j γ_k`. The populations obey a
//! closed triangular cascade, so every `L_k` is an invariant subspace.

use alloc::vec::Vec;

use crate::canonical::GeneratorSpec;
use crate::matcore::{expm, herm_eig, ComplexMatrix, C64};
use crate::superop::{MapFamily, Superoperator};
use crate::{Error, Result, TimeGrid};

/// Largest `‖L‖₁ Δt` accepted for a single propagation step.
pub const MAX_STEP_NORM: f64 = 5.0;

const SUPPORT_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-10;
const PSD_TOL: f64 = 1e-10;

/// Rates `γ_k(t)` and targets `ρ^(k)(t)` for `k = 1..N-1`, sampled on a common
/// grid and linearly interpolated in between. A single sample means
/// time-independent data.
#[derive(Debug, Clone)]
pub struct DecayModelSpec {
    levels: usize,
    times: Vec<f64>,
    /// `rates[k-1][i] = γ_k(times[i])`.
    rates: Vec<Vec<f64>>,
    /// `targets[k-1][i] = ρ^(k)(times[i])`, `N × N`, zero outside the `k × k` block.
    targets: Vec<Vec<ComplexMatrix>>,
}

impl DecayModelSpec {
    pub fn new(
        levels: usize,
        times: Vec<f64>,
        rates: Vec<Vec<f64>>,
        targets: Vec<Vec<ComplexMatrix>>,
    ) -> Result<Self> {
        if levels < 2 {
            return Err(Error::DimensionTooSmall { dim: levels, min: 2 });
        }
        TimeGrid::new(times.clone())?;
        if rates.len() != levels - 1 || targets.len() != levels - 1 {
            return Err(Error::DimensionMismatch { expected: levels - 1, found: rates.len().min(targets.len()) });
        }
        let n = times.len();
        for (idx, (r, rho)) in rates.iter().zip(&targets).enumerate() {
            if r.len() != n || rho.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: r.len().min(rho.len()) });
            }
            if r.iter().any(|g| !g.is_finite()) {
                return Err(Error::InvalidInput("decay rates must be finite"));
            }
            for m in rho {
                check_target(m, levels, idx + 1)?;
            }
        }
        let targets = targets
            .into_iter()
            .enumerate()
            .map(|(idx, rho)| rho.into_iter().map(|m| truncate_support(&m, idx + 1)).collect())
            .collect();
        Ok(Self { levels, times, rates, targets })
    }

    /// Time-independent rates and targets.
    pub fn constant(levels: usize, rates: Vec<f64>, targets: Vec<ComplexMatrix>) -> Result<Self> {
        Self::new(
            levels,
            alloc::vec![0.0],
            rates.into_iter().map(|g| alloc::vec![g]).collect(),
            targets.into_iter().map(|m| alloc::vec![m]).collect(),
        )
    }

    /// Constant rates, every `ρ^(k) = |0><0|`.
    pub fn ground_feeding(levels: usize, rates: Vec<f64>) -> Result<Self> {
        let targets = (1..levels).map(|_| ComplexMatrix::ket_bra(levels, 0, 0)).collect();
        Self::constant(levels, rates, targets)
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn sample_times(&self) -> &[f64] {
        &self.times
    }

    fn is_constant(&self) -> bool {
        self.times.len() == 1
    }

    /// Segment index and weight of the upper sample.
    fn locate(&self, t: f64) -> Result<(usize, f64)> {
        if self.is_constant() {
            return if t.is_finite() { Ok((0, 0.0)) } else { Err(Error::InvalidInput("time must be finite")) };
        }
        let (start, end) = (self.times[0], self.times[self.times.len() - 1]);
        if !(t >= start && t <= end) {
            return Err(Error::TimeOutOfRange { time: t, start, end });
        }
        let i = self.times.partition_point(|&s| s <= t).saturating_sub(1).min(self.times.len() - 2);
        let w = (t - self.times[i]) / (self.times[i + 1] - self.times[i]);
        Ok((i, w))
    }

    /// `γ_k(t)` for `k = 1..N-1`.
    pub fn rate(&self, k: usize, t: f64) -> Result<f64> {
        let r = self.rates.get(k.wrapping_sub(1)).ok_or(Error::IndexOutOfRange { index: k, len: self.levels })?;
        let (i, w) = self.locate(t)?;
        Ok(if w == 0.0 { r[i] } else { (1.0 - w) * r[i] + w * r[i + 1] })
    }

    pub fn rates_at(&self, t: f64) -> Result<Vec<f64>> {
        (1..self.levels).map(|k| self.rate(k, t)).collect()
    }

    /// `ρ^(k)(t)`; interpolated samples are projected back onto the density
    /// matrices by clipping negative eigenvalues and renormalizing.
    pub fn target(&self, k: usize, t: f64) -> Result<ComplexMatrix> {
        let r = self.targets.get(k.wrapping_sub(1)).ok_or(Error::IndexOutOfRange { index: k, len: self.levels })?;
        let (i, w) = self.locate(t)?;
        if w == 0.0 {
            return Ok(r[i].clone());
        }
        if w == 1.0 {
            return Ok(r[i + 1].clone());
        }
        let mixed = &r[i].scale_real(1.0 - w) + &r[i + 1].scale_real(w);
        project_density(&mixed, k)
    }

    /// True when every `γ_k(t) >= -tol`.
    pub fn rates_nonnegative(&self, t: f64, tol: f64) -> Result<bool> {
        Ok(self.rates_at(t)?.iter().all(|&g| g >= -tol))
    }
}

fn check_target(m: &ComplexMatrix, levels: usize, k: usize) -> Result<()> {
    if m.rows() != levels || m.cols() != levels {
        return Err(Error::DimensionMismatch { expected: levels, found: m.rows() });
    }
    let dev = m.hermiticity_deviation();
    if dev > PSD_TOL {
        return Err(Error::NotHermitian { deviation: dev, tol: PSD_TOL });
    }
    for r in 0..levels {
        for c in 0..levels {
            if (r >= k || c >= k) && m[(r, c)].norm() > SUPPORT_TOL {
                return Err(Error::InvalidInput("target state has support outside its level block"));
            }
        }
    }
    if (m.trace() - C64::new(1.0, 0.0)).norm() > TRACE_TOL {
        return Err(Error::InvalidInput("target state must have unit trace"));
    }
    let block = block(m, k);
    let min = herm_eig(&block)?.values[0];
    if min < -PSD_TOL {
        return Err(Error::InvalidInput("target state must be positive semidefinite"));
    }
    Ok(())
}

fn block(m: &ComplexMatrix, k: usize) -> ComplexMatrix {
    let idx: Vec<usize> = (0..k).collect();
    m.select(&idx, &idx)
}

fn embed(b: &ComplexMatrix, n: usize) -> ComplexMatrix {
    let k = b.rows();
    ComplexMatrix::from_fn(n, n, |r, c| if r < k && c < k { b[(r, c)] } else { C64::new(0.0, 0.0) })
}

fn truncate_support(m: &ComplexMatrix, k: usize) -> ComplexMatrix {
    embed(&block(m, k).hermitize(), m.rows())
}

fn project_density(m: &ComplexMatrix, k: usize) -> Result<ComplexMatrix> {
    let eig = herm_eig(&block(m, k))?;
    let clipped: Vec<f64> = eig.values.iter().map(|&p| p.max(0.0)).collect();
    let total: f64 = clipped.iter().sum();
    if !(total > 0.0) {
        return Err(Error::InvalidInput("interpolated target state vanished"));
    }
    let v = &eig.vectors;
    let diag = ComplexMatrix::diag(&clipped.iter().map(|&p| C64::new(p / total, 0.0)).collect::<Vec<_>>());
    Ok(embed(&(&(v * &diag) * &v.adjoint()), m.rows()))
}

/// Generator terms of the defining equation on the first `n` levels.
fn feeding_terms(spec: &DecayModelSpec, n: usize, t: f64) -> Result<Vec<(ComplexMatrix, ComplexMatrix)>> {
    let id = ComplexMatrix::identity(n);
    let mut terms = Vec::new();
    for k in 1..n {
        let g = spec.rate(k, t)?;
        if g == 0.0 {
            continue;
        }
        let rho = block(&spec.target(k, t)?, n);
        let half = ComplexMatrix::ket_bra(n, k, k).scale_real(-0.5 * g);
        terms.push((half.clone(), id.clone()));
        terms.push((id.clone(), half));
        // Σ_a |a><k| X (ρ|a><k|)† = <k|X|k> ρ
        for a in 0..k {
            terms.push((ComplexMatrix::ket_bra(n, a, k).scale_real(g), &rho * &ComplexMatrix::ket_bra(n, a, k)));
        }
    }
    Ok(terms)
}

/// Jump terms `p_j γ_k (σ ρ σ† - ½{σ†σ, ρ})`, `σ = |k_j><k|`, on the first `n` levels.
fn jump_terms(spec: &DecayModelSpec, n: usize, t: f64) -> Result<Vec<(ComplexMatrix, ComplexMatrix)>> {
    let id = ComplexMatrix::identity(n);
    let mut terms = Vec::new();
    for k in 1..n {
        let g = spec.rate(k, t)?;
        if g == 0.0 {
            continue;
        }
        let eig = herm_eig(&block(&spec.target(k, t)?, k))?;
        for (j, &p) in eig.values.iter().enumerate() {
            let w = p * g;
            if w == 0.0 {
                continue;
            }
            let sigma = ComplexMatrix::from_fn(n, n, |r, c| if c == k && r < k { eig.vectors[(r, j)] } else { C64::new(0.0, 0.0) });
            let half = (&sigma.adjoint() * &sigma).scale_real(-0.5 * w);
            terms.push((sigma.scale_real(w), sigma));
            terms.push((half.clone(), id.clone()));
            terms.push((id.clone(), half));
        }
    }
    Ok(terms)
}

/// The generator in its defining (anticommutator plus feeding) form.
pub fn decay_generator(spec: &DecayModelSpec, t: f64) -> Result<GeneratorSpec> {
    GeneratorSpec::new(spec.levels, feeding_terms(spec, spec.levels, t)?)
}

/// The same generator assembled from the spectral decomposition of each `ρ^(k)`.
pub fn canonical_decay(spec: &DecayModelSpec, t: f64) -> Result<GeneratorSpec> {
    GeneratorSpec::new(spec.levels, jump_terms(spec, spec.levels, t)?)
}

/// Canonical-form generator of the dynamics restricted to the first `n`
/// levels (only `k <= n-1` contribute).
pub fn subdynamics_generator(spec: &DecayModelSpec, n: usize, t: f64) -> Result<GeneratorSpec> {
    if n < 2 || n > spec.levels {
        return Err(Error::IndexOutOfRange { index: n, len: spec.levels + 1 });
    }
    GeneratorSpec::new(n, jump_terms(spec, n, t)?)
}

/// Map family and state trajectory on a grid.
#[derive(Debug, Clone)]
pub struct Propagation {
    pub family: MapFamily,
    pub states: Vec<ComplexMatrix>,
}

/// Integrates `Ė = L(t) E` with one midpoint-generator exponential per grid
/// step. The grid must start at `t = 0`.
pub fn propagate_generator<F>(dim: usize, grid: &TimeGrid, mut generator: F) -> Result<MapFamily>
where
    F: FnMut(f64) -> Result<GeneratorSpec>,
{
    let times = grid.times();
    let mut maps = Vec::with_capacity(times.len());
    let mut current = Superoperator::identity(dim);
    maps.push(current.clone());
    for w in times.windows(2) {
        let dt = w[1] - w[0];
        let l = generator(0.5 * (w[0] + w[1]))?.superoperator();
        if l.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: l.dim() });
        }
        let norm_dt = l.mat().norm_one() * dt;
        if norm_dt > MAX_STEP_NORM {
            return Err(Error::StepTooLarge { time: w[0], norm_dt, limit: MAX_STEP_NORM });
        }
        let step = Superoperator::new(dim, expm(&l.mat().scale_real(dt))?)?;
        current = step.compose(&current)?;
        maps.push(current.clone());
    }
    MapFamily::new(times.to_vec(), maps)
}

/// Propagates `rho0` under the decay generator.
pub fn propagate(spec: &DecayModelSpec, rho0: &ComplexMatrix, grid: &TimeGrid) -> Result<Propagation> {
    let n = spec.levels;
    if rho0.rows() != n || rho0.cols() != n {
        return Err(Error::DimensionMismatch { expected: n, found: rho0.rows() });
    }
    let dev = rho0.hermiticity_deviation();
    if dev > PSD_TOL {
        return Err(Error::NotHermitian { deviation: dev, tol: PSD_TOL });
    }
    if (rho0.trace() - C64::new(1.0, 0.0)).norm() > TRACE_TOL {
        return Err(Error::InvalidInput("initial state must have unit trace"));
    }
    let family = propagate_generator(n, grid, |t| decay_generator(spec, t))?;
    let states = family.maps().iter().map(|m| m.apply(rho0)).collect::<Result<Vec<_>>>()?;
    Ok(Propagation { family, states })
}

/// Level populations `p_0..p_{N-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct CascadeState {
    pub probs: Vec<f64>,
}

impl CascadeState {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.iter().any(|p| !p.is_finite() || *p < -1e-12) {
            return Err(Error::InvalidInput("probabilities must be finite and non-negative"));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidInput("probabilities must sum to one"));
        }
        Ok(Self { probs })
    }

    /// All population in level `k`.
    pub fn level(levels: usize, k: usize) -> Self {
        let mut probs = alloc::vec![0.0; levels];
        probs[k] = 1.0;
        Self { probs }
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }
}

/// Right-hand side `ṗ_k = -γ_k p_k + Σ_{k'>k} ρ^(k')_{kk} γ_{k'} p_{k'}`.
pub fn cascade_rhs(spec: &DecayModelSpec, t: f64, p: &[f64]) -> Result<Vec<f64>> {
    let n = spec.levels;
    if p.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: p.len() });
    }
    let mut dp = alloc::vec![0.0; n];
    for k in 1..n {
        let flow = spec.rate(k, t)? * p[k];
        if flow == 0.0 {
            continue;
        }
        dp[k] -= flow;
        let rho = spec.target(k, t)?;
        for (a, d) in dp.iter_mut().enumerate().take(k) {
            *d += rho[(a, a)].re * flow;
        }
    }
    Ok(dp)
}

/// Classical RK4 on the population cascade, one step per grid interval.
pub fn cascade_probs(spec: &DecayModelSpec, p0: &CascadeState, grid: &TimeGrid) -> Result<Vec<CascadeState>> {
    let n = spec.levels;
    if p0.probs.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: p0.probs.len() });
    }
    let axpy = |p: &[f64], h: f64, k: &[f64]| -> Vec<f64> { p.iter().zip(k).map(|(a, b)| a + h * b).collect() };
    let mut out = Vec::with_capacity(grid.len());
    let mut p = p0.probs.clone();
    out.push(CascadeState { probs: p.clone() });
    for w in grid.times().windows(2) {
        let (t, h) = (w[0], w[1] - w[0]);
        let gmax = spec.rates_at(t)?.iter().chain(spec.rates_at(w[1])?.iter()).fold(0.0f64, |m, g| m.max(g.abs()));
        if 2.0 * gmax * h > MAX_STEP_NORM {
            return Err(Error::StepTooLarge { time: t, norm_dt: 2.0 * gmax * h, limit: MAX_STEP_NORM });
        }
        let k1 = cascade_rhs(spec, t, &p)?;
        let k2 = cascade_rhs(spec, t + 0.5 * h, &axpy(&p, 0.5 * h, &k1))?;
        let k3 = cascade_rhs(spec, t + 0.5 * h, &axpy(&p, 0.5 * h, &k2))?;
        let k4 = cascade_rhs(spec, w[1], &axpy(&p, h, &k3))?;
        for i in 0..n {
            p[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        out.push(CascadeState { probs: p.clone() });
    }
    Ok(out)
}
