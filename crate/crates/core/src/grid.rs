use alloc::vec::Vec;

use crate::{Error, Result};

/// Strictly increasing, finite sample times.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    times: Vec<f64>,
}

impl TimeGrid {
    pub fn new(times: Vec<f64>) -> Result<Self> {
        if times.is_empty() {
            return Err(Error::InvalidInput("time grid is empty"));
        }
        if times.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidInput("time grid contains a non-finite value"));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidInput("time grid must be strictly increasing"));
        }
        Ok(Self { times })
    }

    /// `steps + 1` equally spaced points from `start` to `stop` inclusive.
    pub fn uniform(start: f64, stop: f64, steps: usize) -> Result<Self> {
        if steps == 0 || !(stop > start) {
            return Err(Error::InvalidInput("uniform grid needs steps >= 1 and stop > start"));
        }
        let h = (stop - start) / steps as f64;
        let mut times: Vec<f64> = (0..steps).map(|i| start + h * i as f64).collect();
        times.push(stop);
        Self::new(times)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn start(&self) -> f64 {
        self.times[0]
    }

    pub fn end(&self) -> f64 {
        self.times[self.times.len() - 1]
    }
}
