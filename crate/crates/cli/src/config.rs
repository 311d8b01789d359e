//! JSON run configuration.

use std::path::{Path, PathBuf};

use opendiv_core::canonical::GeneratorSpec;
use opendiv_core::decay::DecayModelSpec;
use opendiv_core::dephasing::{BathMode, BathSpec};
use opendiv_core::superop::{MapFamily, Superoperator};
use opendiv_core::{ComplexMatrix, TimeGrid, C64};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const SCHEMA_VERSION: u32 = 1;
pub const MAX_LEVEL: usize = 64;

fn default_tol() -> f64 {
    1e-10
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    pub model: ModelConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub levels: Option<LevelRange>,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub pairwise: bool,
    /// Subspace sizes analysed by `check-family`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub splits: Vec<usize>,
    /// Time of the generator snapshot used by `canonical`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub snapshot_time: Option<f64>,
    /// Output directory; `--out` takes precedence.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ModelConfig {
    Dephasing(DephasingModel),
    Decay(DecayModel),
    RawFamily(RawFamilyModel),
    Generator(GeneratorModel),
}

impl ModelConfig {
    pub fn kind(&self) -> &'static str {
        match self {
            ModelConfig::Dephasing(_) => "dephasing",
            ModelConfig::Decay(_) => "decay",
            ModelConfig::RawFamily(_) => "raw-family",
            ModelConfig::Generator(_) => "generator",
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl GridConfig {
    pub fn to_grid(&self) -> CliResult<TimeGrid> {
        if self.steps < 2 {
            return Err(CliError::config(format!("grid needs at least 2 steps, got {}", self.steps)));
        }
        if !(self.start.is_finite() && self.stop.is_finite() && self.stop > self.start) {
            return Err(CliError::config("grid is empty: stop must exceed start"));
        }
        TimeGrid::uniform(self.start, self.stop, self.steps).map_err(|e| CliError::config(e.to_string()))
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LevelRange {
    Single(usize),
    Range { min: usize, max: usize },
}

impl LevelRange {
    /// Inclusive `(min, max)`; a single `k` means `2..=k`.
    pub fn bounds(&self) -> CliResult<(usize, usize)> {
        let (lo, hi) = match *self {
            LevelRange::Single(k) => (2, k),
            LevelRange::Range { min, max } => (min, max),
        };
        if lo < 2 || hi > MAX_LEVEL || lo > hi {
            return Err(CliError::config(format!("level range {lo}..{hi} must lie within 2..{MAX_LEVEL}")));
        }
        Ok((lo, hi))
    }
}

/// A matrix as real rows, `{"diag": [...]}` or `{"re": rows, "im": rows}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixJson {
    Real(Vec<Vec<f64>>),
    Diag { diag: Vec<f64> },
    Complex { re: Vec<Vec<f64>>, im: Vec<Vec<f64>> },
}

impl MatrixJson {
    pub fn to_matrix(&self) -> CliResult<ComplexMatrix> {
        let rows_to = |rows: &[Vec<f64>]| -> CliResult<(usize, usize, Vec<f64>)> {
            let n = rows.len();
            let m = rows.first().map_or(0, Vec::len);
            if n == 0 || m == 0 || rows.iter().any(|r| r.len() != m) {
                return Err(CliError::config("matrix rows must be non-empty and of equal length"));
            }
            Ok((n, m, rows.concat()))
        };
        let out = match self {
            MatrixJson::Real(rows) => {
                let (n, m, data) = rows_to(rows)?;
                ComplexMatrix::from_real(n, m, &data)
            }
            MatrixJson::Diag { diag } => {
                if diag.is_empty() {
                    return Err(CliError::config("diagonal must be non-empty"));
                }
                Ok(ComplexMatrix::diag(&diag.iter().map(|&x| C64::new(x, 0.0)).collect::<Vec<_>>()))
            }
            MatrixJson::Complex { re, im } => {
                let (n, m, re) = rows_to(re)?;
                let (n2, m2, im) = rows_to(im)?;
                if (n, m) != (n2, m2) {
                    return Err(CliError::config("real and imaginary parts differ in shape"));
                }
                ComplexMatrix::from_row_major(n, m, re.iter().zip(&im).map(|(&a, &b)| C64::new(a, b)).collect())
            }
        };
        out.map_err(|e| CliError::config(e.to_string()))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T: Clone> OneOrMany<T> {
    fn expand(&self, n: usize) -> Option<Vec<T>> {
        match self {
            OneOrMany::One(x) => Some(vec![x.clone(); n]),
            OneOrMany::Many(v) if v.len() == n => Some(v.clone()),
            OneOrMany::Many(v) if v.len() == 1 => Some(vec![v[0].clone(); n]),
            OneOrMany::Many(_) => None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DephasingModel {
    pub temperature: f64,
    pub modes: Vec<BathModeConfig>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BathModeConfig {
    pub omega: f64,
    pub coupling: f64,
}

impl DephasingModel {
    pub fn bath(&self) -> CliResult<BathSpec> {
        let modes = self.modes.iter().map(|m| BathMode { omega: m.omega, coupling: m.coupling }).collect();
        BathSpec::new(modes, self.temperature).map_err(|e| CliError::config(format!("bath: {e}")))
    }
}

/// Rates and targets per `k = 1..levels-1`. Without `times` the data is
/// constant; with `times` each entry is either one value or one per sample.
/// Targets may be given as `k × k` blocks or full `levels × levels` matrices.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecayModel {
    pub levels: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub times: Option<Vec<f64>>,
    pub rates: Vec<OneOrMany<f64>>,
    pub targets: Vec<OneOrMany<MatrixJson>>,
    /// Initial state for the trajectory probe; a seeded random state if absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_state: Option<MatrixJson>,
}

impl DecayModel {
    pub fn spec(&self) -> CliResult<DecayModelSpec> {
        let n = self.levels;
        if !(2..=MAX_LEVEL).contains(&n) {
            return Err(CliError::config(format!("decay levels must lie within 2..{MAX_LEVEL}")));
        }
        if self.rates.len() != n - 1 || self.targets.len() != n - 1 {
            return Err(CliError::config(format!("decay model with {n} levels needs {} rates and targets", n - 1)));
        }
        let times = self.times.clone().unwrap_or_else(|| vec![0.0]);
        let samples = times.len();
        let mut rates = Vec::with_capacity(n - 1);
        let mut targets = Vec::with_capacity(n - 1);
        for k in 1..n {
            let r = self.rates[k - 1]
                .expand(samples)
                .ok_or_else(|| CliError::config(format!("rate {k} must have 1 or {samples} samples")))?;
            let t = self.targets[k - 1]
                .expand(samples)
                .ok_or_else(|| CliError::config(format!("target {k} must have 1 or {samples} samples")))?
                .iter()
                .map(|m| embed(&m.to_matrix()?, n, k))
                .collect::<CliResult<Vec<_>>>()?;
            rates.push(r);
            targets.push(t);
        }
        DecayModelSpec::new(n, times, rates, targets).map_err(|e| CliError::config(format!("decay model: {e}")))
    }
}

fn embed(m: &ComplexMatrix, n: usize, k: usize) -> CliResult<ComplexMatrix> {
    if m.rows() == n && m.cols() == n {
        return Ok(m.clone());
    }
    if m.rows() == k && m.cols() == k {
        return Ok(ComplexMatrix::from_fn(n, n, |r, c| if r < k && c < k { m[(r, c)] } else { C64::new(0.0, 0.0) }));
    }
    Err(CliError::config(format!("target {k} must be {k}x{k} or {n}x{n}")))
}

/// Explicit superoperators (column-stacking convention) on a time list
/// starting at 0.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawFamilyModel {
    pub dim: usize,
    pub times: Vec<f64>,
    pub maps: Vec<MatrixJson>,
}

impl RawFamilyModel {
    pub fn family(&self) -> CliResult<MapFamily> {
        let maps = self
            .maps
            .iter()
            .map(|m| Superoperator::new(self.dim, m.to_matrix()?).map_err(|e| CliError::config(format!("map: {e}"))))
            .collect::<CliResult<Vec<_>>>()?;
        MapFamily::new(self.times.clone(), maps).map_err(|e| CliError::config(format!("family: {e}")))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelConfig {
    pub rate: f64,
    pub op: MatrixJson,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermConfig {
    pub a: MatrixJson,
    pub b: MatrixJson,
}

/// `ρ̇ = -i[H, ρ] + Σ rate (L ρ L† - ½{L†L, ρ}) + Σ A ρ B†`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorModel {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hamiltonian: Option<MatrixJson>,
    #[serde(default)]
    pub channels: Vec<ChannelConfig>,
    #[serde(default)]
    pub terms: Vec<TermConfig>,
}

impl GeneratorModel {
    pub fn generator(&self) -> CliResult<GeneratorSpec> {
        let bad = |e: opendiv_core::Error| CliError::config(format!("generator: {e}"));
        let h = self.hamiltonian.as_ref().map(MatrixJson::to_matrix).transpose()?;
        let channels =
            self.channels.iter().map(|c| Ok((c.rate, c.op.to_matrix()?))).collect::<CliResult<Vec<_>>>()?;
        let mut terms = GeneratorSpec::lindblad(self.dim, h.as_ref(), &channels).map_err(bad)?.terms().to_vec();
        for t in &self.terms {
            terms.push((t.a.to_matrix()?, t.b.to_matrix()?));
        }
        GeneratorSpec::new(self.dim, terms).map_err(bad)
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> CliResult<Self> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| CliError::config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> CliResult<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(CliError::config(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(CliError::config("tol must be positive"));
        }
        if let Some(g) = &self.grid {
            g.to_grid()?;
        }
        if let Some(l) = &self.levels {
            l.bounds()?;
        }
        Ok(())
    }

    pub fn grid(&self) -> CliResult<TimeGrid> {
        self.grid.as_ref().ok_or_else(|| CliError::config("a time grid is required"))?.to_grid()
    }

    /// SHA-256 of the canonical serialization, excluding the output location.
    pub fn hash(&self) -> String {
        use sha2::{Digest, Sha256};
        let mut cfg = self.clone();
        cfg.output = None;
        hex::encode(Sha256::digest(serde_json::to_vec(&cfg).expect("config serializes")))
    }
}
