//! Subcommand implementations.

use std::path::{Path, PathBuf};

use opendiv_core::canonical::{canonical_form, is_divisible_generator, GeneratorSpec};
use opendiv_core::decay::{propagate, subdynamics_generator};
use opendiv_core::dephasing::{
    dephasing_generator, hierarchy_scan, toeplitz_symbol_min, DephasingFamily, SymbolWeighting,
};
use opendiv_core::matcore::herm_eigvals;
use opendiv_core::superop::{
    divisibility_scan, intermediate_map, is_cptp, is_invariant_subspace, composition_gap, trace_deviation, MapFamily,
    ScanMode, Superoperator, SubspaceSplit,
};
use opendiv_core::{ComplexMatrix, Error, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::config::{LevelRange, ModelConfig, RunConfig};
use crate::error::{CliError, CliResult};
use crate::output::write_atomic;
use crate::report::{Report, TimeRecord};

/// Points of the `λ` grid used for the Toeplitz symbol minimum.
pub const SYMBOL_POINTS: usize = 721;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    DephasingScan,
    DecayScan,
    CheckFamily,
    Canonical,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::DephasingScan => "dephasing-scan",
            Command::DecayScan => "decay-scan",
            Command::CheckFamily => "check-family",
            Command::Canonical => "canonical",
        }
    }
}

/// Command-line values that take precedence over the config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub pairwise: bool,
}

impl Overrides {
    pub fn apply(&self, cfg: &mut RunConfig) -> CliResult<()> {
        if let Some(out) = &self.out {
            cfg.output = Some(out.clone());
        }
        if let Some(tol) = self.tol {
            cfg.tol = tol;
        }
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        cfg.pairwise |= self.pairwise;
        cfg.validate()
    }
}

/// Paths written by [`run`].
#[derive(Debug, Clone)]
pub struct Written {
    pub report: Report,
    pub json: PathBuf,
    pub csv: PathBuf,
}

/// Executes `cmd` and writes `<out>/<command>.json` and `<out>/<command>.csv`.
pub fn run(cmd: Command, cfg: &RunConfig) -> CliResult<Written> {
    let report = execute(cmd, cfg)?;
    let dir = cfg.output.clone().unwrap_or_else(|| PathBuf::from("."));
    let json = dir.join(format!("{}.json", cmd.name()));
    let csv = dir.join(format!("{}.csv", cmd.name()));
    let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
    text.push('\n');
    write_atomic(&json, text.as_bytes())?;
    write_atomic(&csv, report.to_csv().as_bytes())?;
    Ok(Written { report, json, csv })
}

/// Runs `cmd` without touching the file system.
pub fn execute(cmd: Command, cfg: &RunConfig) -> CliResult<Report> {
    match cmd {
        Command::DephasingScan => dephasing_scan(cfg),
        Command::DecayScan => decay_scan(cfg),
        Command::CheckFamily => check_family(cfg),
        Command::Canonical => canonical(cfg),
    }
}

fn model_err(cmd: Command, time: Option<f64>, level: Option<usize>) -> impl FnOnce(Error) -> CliError {
    move |source| CliError::Model { command: cmd.name(), time, level, source }
}

fn wrong_model(cmd: Command, cfg: &RunConfig) -> CliError {
    CliError::config(format!("{} does not accept a {} model", cmd.name(), cfg.model.kind()))
}

fn dephasing_scan(cfg: &RunConfig) -> CliResult<Report> {
    let cmd = Command::DephasingScan;
    let ModelConfig::Dephasing(model) = &cfg.model else { return Err(wrong_model(cmd, cfg)) };
    let (lo, hi) = cfg.levels.ok_or_else(|| CliError::config("dephasing-scan needs levels"))?.bounds()?;
    let grid = cfg.grid()?;
    let fam = DephasingFamily::new(model.bath()?, hi, grid.clone()).map_err(model_err(cmd, None, Some(hi)))?;
    let mut records = Vec::with_capacity(grid.len());
    let mut symbol = Vec::with_capacity(grid.len());
    for &t in grid.times() {
        let scan = hierarchy_scan(&fam, t, cfg.tol).map_err(model_err(cmd, Some(t), None))?;
        let levels: Vec<_> = scan.levels.iter().filter(|(j, _)| *j >= lo).collect();
        records.push(TimeRecord {
            time: t,
            min_eigenvalues: levels.iter().map(|(_, v)| v.min_eigenvalue).collect(),
            divisible: levels.iter().map(|(_, v)| v.is_psd).collect(),
        });
        symbol.push(toeplitz_symbol_min(fam.bath(), t, hi - 2, SymbolWeighting::Fejer, SYMBOL_POINTS).1);
    }
    let mut report = Report::new(cmd.name(), cfg.hash(), cfg.seed, cfg.tol, (lo..=hi).collect(), records);
    report.details = json!({
        "symbol_order": hi - 2,
        "symbol_points": SYMBOL_POINTS,
        "fejer_symbol_min": symbol,
    });
    Ok(report)
}

fn random_state(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(n, n, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    let rho = &g * &g.adjoint();
    let tr = rho.trace().re;
    rho.scale_real(1.0 / tr).hermitize()
}

fn decay_scan(cfg: &RunConfig) -> CliResult<Report> {
    let cmd = Command::DecayScan;
    let ModelConfig::Decay(model) = &cfg.model else { return Err(wrong_model(cmd, cfg)) };
    let spec = model.spec()?;
    let n = spec.levels();
    let (lo, hi) = cfg.levels.unwrap_or(LevelRange::Single(n)).bounds()?;
    if hi > n {
        return Err(CliError::config(format!("levels up to {hi} exceed the model's {n} levels")));
    }
    let grid = cfg.grid()?;
    let mut records = Vec::with_capacity(grid.len());
    for &t in grid.times() {
        let mut rec = TimeRecord { time: t, min_eigenvalues: Vec::new(), divisible: Vec::new() };
        for level in lo..=hi {
            let v = subdynamics_generator(&spec, level, t)
                .and_then(|g| is_divisible_generator(&g, cfg.tol))
                .map_err(model_err(cmd, Some(t), Some(level)))?;
            rec.min_eigenvalues.push(v.min_eigenvalue);
            rec.divisible.push(v.is_psd);
        }
        records.push(rec);
    }
    let mut report = Report::new(cmd.name(), cfg.hash(), cfg.seed, cfg.tol, (lo..=hi).collect(), records);

    if grid.start() == 0.0 {
        let rho0 = match &model.initial_state {
            Some(m) => m.to_matrix()?,
            None => random_state(&mut ChaCha8Rng::seed_from_u64(cfg.seed), n),
        };
        let prop = propagate(&spec, &rho0, &grid).map_err(model_err(cmd, None, Some(n)))?;
        let mode = if cfg.pairwise { ScanMode::Pairwise } else { ScanMode::Consecutive };
        let full = divisibility_scan(&prop.family, cfg.tol, mode).map_err(model_err(cmd, None, Some(n)))?;
        let mut sublevels = Vec::new();
        let mut compressed_holds = true;
        for k in lo..=hi.min(n - 1) {
            let split = SubspaceSplit::new(n, k).map_err(model_err(cmd, None, Some(k)))?;
            let invariant = is_invariant_subspace(&prop.family, &split, 1e-9).map_err(model_err(cmd, None, Some(k)))?;
            let sub = prop.family.compress(&split).map_err(model_err(cmd, None, Some(k)))?;
            let scan = divisibility_scan(&sub, cfg.tol, mode).map_err(model_err(cmd, None, Some(k)))?;
            compressed_holds &= !full.divisible || scan.divisible;
            sublevels.push(json!({"level": k, "invariant": invariant, "divisible": scan.divisible}));
        }
        let max_trace_dev = prop.states.iter().map(|s| (s.trace().re - 1.0).abs()).fold(0.0, f64::max);
        let min_eig = prop
            .states
            .iter()
            .map(|s| herm_eigvals(&s.hermitize()).map(|v| v[0]))
            .collect::<Result<Vec<_>, _>>()
            .map_err(model_err(cmd, None, None))?
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        report.details = json!({
            "family": {
                "scan_mode": if cfg.pairwise { "pairwise" } else { "consecutive" },
                "divisible": full.divisible,
                "first_failure": full.first_failure().map(|f| [f.t1, f.t2]),
                "compressed": sublevels,
                "compressed_divisible_when_full_divisible": compressed_holds,
            },
            "trajectory": {
                "initial_state": if model.initial_state.is_some() { "config" } else { "seeded" },
                "max_trace_deviation": max_trace_dev,
                "min_eigenvalue": min_eig,
            },
        });
    }
    Ok(report)
}

fn check_family(cfg: &RunConfig) -> CliResult<Report> {
    let cmd = Command::CheckFamily;
    let ModelConfig::RawFamily(model) = &cfg.model else { return Err(wrong_model(cmd, cfg)) };
    let family = model.family()?;
    let dim = family.dim();
    let mut levels: Vec<usize> = cfg.splits.clone();
    levels.sort_unstable();
    levels.dedup();
    if levels.iter().any(|&k| k == 0 || k >= dim) {
        return Err(CliError::config(format!("splits must lie within 1..{}", dim - 1)));
    }
    let mut families: Vec<MapFamily> = Vec::with_capacity(levels.len() + 1);
    let mut split_details = Vec::new();
    for &k in &levels {
        let split = SubspaceSplit::new(dim, k).map_err(model_err(cmd, None, Some(k)))?;
        let invariant = is_invariant_subspace(&family, &split, cfg.tol.max(1e-9)).map_err(model_err(cmd, None, Some(k)))?;
        let mut gap = 0.0f64;
        for i in 1..family.len() - 1 {
            let g = composition_gap(&family, &split, i, i + 1).map_err(model_err(cmd, Some(family.times()[i]), Some(k)))?;
            gap = gap.max(g);
        }
        split_details.push(json!({"level": k, "invariant": invariant, "max_composition_gap": gap}));
        families.push(family.compress(&split).map_err(model_err(cmd, None, Some(k)))?);
    }
    levels.push(dim);
    families.push(family.clone());

    let mut records = Vec::with_capacity(family.len());
    for (i, &t) in family.times().iter().enumerate() {
        let mut rec = TimeRecord { time: t, min_eigenvalues: Vec::new(), divisible: Vec::new() };
        for (f, &level) in families.iter().zip(&levels) {
            let q = if i == 0 { Superoperator::identity(f.dim()) } else {
                intermediate_map(f, i - 1, i).map_err(model_err(cmd, Some(t), Some(level)))?
            };
            let v = is_cptp(&q, cfg.tol);
            rec.min_eigenvalues.push(v.min_choi_eigenvalue);
            rec.divisible.push(v.cp && v.tp);
        }
        records.push(rec);
    }
    let maps: Vec<_> = family
        .times()
        .iter()
        .zip(family.maps())
        .map(|(&t, m)| {
            let v = is_cptp(m, cfg.tol);
            json!({"time": t, "cp": v.cp, "tp": v.tp, "min_choi_eigenvalue": v.min_choi_eigenvalue, "trace_deviation": trace_deviation(m)})
        })
        .collect();
    let mode = if cfg.pairwise { ScanMode::Pairwise } else { ScanMode::Consecutive };
    let scan = divisibility_scan(&family, cfg.tol, mode).map_err(model_err(cmd, None, Some(dim)))?;
    let mut report = Report::new(cmd.name(), cfg.hash(), cfg.seed, cfg.tol, levels, records);
    report.details = json!({
        "maps": maps,
        "splits": split_details,
        "scan_mode": if cfg.pairwise { "pairwise" } else { "consecutive" },
        "family_divisible": scan.divisible,
        "first_failure": scan.first_failure().map(|f| [f.t1, f.t2]),
    });
    Ok(report)
}

fn snapshot_generator(cmd: Command, cfg: &RunConfig) -> CliResult<(f64, GeneratorSpec)> {
    let t = cfg.snapshot_time.unwrap_or(0.0);
    let g = match &cfg.model {
        ModelConfig::Generator(m) => m.generator()?,
        ModelConfig::Dephasing(m) => {
            let (_, k) = cfg.levels.ok_or_else(|| CliError::config("canonical on a dephasing model needs levels"))?.bounds()?;
            let grid = opendiv_core::TimeGrid::new(vec![t]).map_err(|e| CliError::config(e.to_string()))?;
            let fam = DephasingFamily::new(m.bath()?, k, grid).map_err(model_err(cmd, Some(t), Some(k)))?;
            dephasing_generator(&fam, t).map_err(model_err(cmd, Some(t), Some(k)))?
        }
        ModelConfig::Decay(m) => {
            let spec = m.spec()?;
            opendiv_core::decay::decay_generator(&spec, t).map_err(model_err(cmd, Some(t), Some(spec.levels())))?
        }
        ModelConfig::RawFamily(_) => return Err(wrong_model(cmd, cfg)),
    };
    Ok((t, g))
}

fn canonical(cfg: &RunConfig) -> CliResult<Report> {
    let cmd = Command::Canonical;
    let (t, g) = snapshot_generator(cmd, cfg)?;
    let dim = g.dim();
    let cf = canonical_form(&g).map_err(model_err(cmd, Some(t), Some(dim)))?;
    let verdict = is_divisible_generator(&g, cfg.tol).map_err(model_err(cmd, Some(t), Some(dim)))?;
    let record = TimeRecord { time: t, min_eigenvalues: vec![verdict.min_eigenvalue], divisible: vec![verdict.is_psd] };
    let h = &cf.hamiltonian;
    let rows = |f: fn(C64) -> f64| -> Vec<Vec<f64>> { (0..dim).map(|r| (0..dim).map(|c| f(h[(r, c)])).collect()).collect() };
    let mut report = Report::new(cmd.name(), cfg.hash(), cfg.seed, cfg.tol, vec![dim], vec![record]);
    report.details = json!({
        "rates": cf.rates,
        "hamiltonian": {"re": rows(|z| z.re), "im": rows(|z| z.im)},
        "reconstruction_error": cf.superoperator().map_err(model_err(cmd, Some(t), Some(dim)))?.max_abs_diff(&g.superoperator()),
    });
    Ok(report)
}

/// Loads `path`, applies `overrides`, runs and writes the outputs.
pub fn run_from_path(cmd: Command, path: &Path, overrides: &Overrides) -> CliResult<Written> {
    let mut cfg = RunConfig::load(path)?;
    overrides.apply(&mut cfg)?;
    run(cmd, &cfg)
}
