//! Simulation and analysis of a tubular reactor with axial dispersion run
//! under periodic flow reversal.
//!
//! The [`reactor`] module evaluates the dimensionless balance equations,
//! [`integrator`] advances them across switching intervals and samples the
//! outlet once per interval, [`analysis`] turns those samples into spectra,
//! entropies and orbit classes, and [`sweep`] runs families of simulations
//! for bifurcation, spectral, entropy and initial-condition diagrams.

pub mod analysis;
pub mod config;
pub mod error;
pub mod integrator;
pub mod output;
pub mod reactor;
pub mod sweep;

pub use error::{Error, Result};
pub use integrator::{run_cycle, simulate, step, RunSchedule, StroboSeries};
pub use reactor::{mirror, phi1, phi2, spatial_rhs, GridSpec, ModelParams, ReactorState};
