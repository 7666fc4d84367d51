//! Analytic and simulation models for multi-stage data aggregation in dense
//! machine-type networks: energy density, SIR and rate coverage, hop bounds,
//! and a Monte Carlo reference.

pub mod coverage;
pub mod energy;
pub mod error;
pub mod hops;
pub mod mc;
pub mod model;
pub mod quad;
pub mod rate;
pub mod specfun;

pub use error::{Error, Result};
