//! Scan reports and their CSV rendering.

use std::fmt::Write as _;

use opendiv_core::dephasing::is_downward_closed;
use serde::{Deserialize, Serialize};

/// Verdicts at one grid time, one entry per level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeRecord {
    pub time: f64,
    pub min_eigenvalues: Vec<f64>,
    pub divisible: Vec<bool>,
}

/// Maximal run of grid times at which some level fails.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessInterval {
    pub start: f64,
    pub end: f64,
    pub failing_levels: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config_hash: String,
    pub seed: u64,
    pub tol: f64,
    pub levels: Vec<usize>,
    pub records: Vec<TimeRecord>,
    pub witness_intervals: Vec<WitnessInterval>,
    pub hierarchy_consistent: bool,
    pub divisible: bool,
    #[serde(default, skip_serializing_if = "serde_json::Value::is_null")]
    pub details: serde_json::Value,
}

impl Report {
    pub fn new(command: &str, config_hash: String, seed: u64, tol: f64, levels: Vec<usize>, records: Vec<TimeRecord>) -> Self {
        let witness_intervals = witness_intervals(&levels, &records);
        Self {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            config_hash,
            seed,
            tol,
            hierarchy_consistent: hierarchy_consistent(&records),
            divisible: records.iter().all(|r| r.divisible.iter().all(|&d| d)),
            levels,
            records,
            witness_intervals,
            details: serde_json::Value::Null,
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("time");
        for l in &self.levels {
            let _ = write!(out, ",min_eig_{l}");
        }
        for l in &self.levels {
            let _ = write!(out, ",divisible_{l}");
        }
        out.push('\n');
        for r in &self.records {
            let _ = write!(out, "{:.16e}", r.time);
            for x in &r.min_eigenvalues {
                let _ = write!(out, ",{x:.16e}");
            }
            for d in &r.divisible {
                let _ = write!(out, ",{d}");
            }
            out.push('\n');
        }
        out
    }
}

/// True iff at every time the passing levels (ascending) are downward closed.
pub fn hierarchy_consistent(records: &[TimeRecord]) -> bool {
    records.iter().all(|r| is_downward_closed(r.divisible.iter().copied()))
}

pub fn witness_intervals(levels: &[usize], records: &[TimeRecord]) -> Vec<WitnessInterval> {
    let mut out: Vec<WitnessInterval> = Vec::new();
    let mut open = false;
    for r in records {
        let failing: Vec<usize> = levels.iter().zip(&r.divisible).filter(|(_, &d)| !d).map(|(&l, _)| l).collect();
        if failing.is_empty() {
            open = false;
            continue;
        }
        match out.last_mut() {
            Some(w) if open => {
                w.end = r.time;
                for l in failing {
                    if !w.failing_levels.contains(&l) {
                        w.failing_levels.push(l);
                    }
                }
                w.failing_levels.sort_unstable();
            }
            _ => out.push(WitnessInterval { start: r.time, end: r.time, failing_levels: failing }),
        }
        open = true;
    }
    out
}
