//! Crossover scale between the vacuum (Boyer) spectrum and a turbulent
//! power-law spectrum of zero-point-field fluctuations, with first-order and
//! Monte Carlo uncertainty propagation and dissipation-rate bounds on the
//! degree of turbulence.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod constants;
pub mod dissipation;
pub mod error;
pub mod quantity;
pub mod report;
pub mod spectra;
pub mod transition;
pub mod units;

pub use error::{Error, Result};
