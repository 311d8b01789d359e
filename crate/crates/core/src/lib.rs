//! Dense superoperator toolkit for finite-level open quantum systems.
//!
//! The crate represents dynamical maps and time-local generators as matrices
//! acting on column-stacked operators, decides complete positivity, trace
//! preservation and (CP-)divisibility, and provides two reference models whose
//! invariant-subspace chains give rise to hierarchies of divisibility
//! conditions: the boson-boson pure-dephasing model ([`dephasing`]) and the
//! `N`-level decay model ([`decay`]).
//!
//! Everything here is pure computation over `alloc` containers, so the crate
//! builds without `std` (disable the default `std` feature).

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod canonical;
pub mod decay;
pub mod dephasing;
mod error;
mod grid;
mod math;
pub mod matcore;
pub mod superop;

pub use error::{Error, Result};
pub use grid::TimeGrid;
pub use matcore::{ComplexMatrix, PsdVerdict, C64};

/// Default relative tolerance for PSD and trace tests.
pub const DEFAULT_TOL: f64 = 1e-10;
