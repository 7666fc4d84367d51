//! Monte Carlo reference: PPP deployments with hierarchical aggregator tiers,
//! TDMA-scheduled links with Rayleigh fading, and estimators for every
//! quantity the analytic modules predict.
//!
//! Deployments are independent. Each gets its own seed derived from a root
//! seed with [`deployment_seed`], runs on the rayon pool, and results are
//! merged in deployment order, so estimates are bit-identical for a given
//! root seed regardless of thread count.

pub mod deployment;
pub mod links;
pub mod measure;
mod spatial;

use rayon::prelude::*;

use crate::error::{Error, Result};

pub use deployment::{region_warning, sample_deployment, Deployment, StageLayout, Tier};
pub use links::{simulate_links, LinkOptions, LinkSample};
pub use measure::*;

/// Minimum sample count behind a reported estimate.
pub const MIN_SAMPLES: u64 = 100;

/// Window half-width of the reference deployment (km).
pub const REFERENCE_HALF_WIDTH: f64 = 2.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    /// Normal-approximation 95% half-width, 1.96 standard errors.
    pub half_width_95: f64,
    pub n_samples: u64,
}

impl McEstimate {
    pub fn contains(&self, v: f64) -> bool {
        (self.mean - v).abs() <= self.half_width_95
    }
}

/// Running first and second moments; merging is associative.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SampleStats {
    pub n: u64,
    pub sum: f64,
    pub sum_sq: f64,
}

impl SampleStats {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        self.sum += x;
        self.sum_sq += x * x;
    }

    pub fn merge(&mut self, other: &SampleStats) {
        self.n += other.n;
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
    }

    pub fn mean(&self) -> f64 {
        self.sum / self.n as f64
    }

    pub fn variance(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        let n = self.n as f64;
        ((self.sum_sq - self.sum * self.sum / n) / (n - 1.0)).max(0.0)
    }

    pub fn estimate(&self) -> Result<McEstimate> {
        if self.n < MIN_SAMPLES {
            return Err(Error::Degenerate(format!(
                "only {} samples collected, at least {MIN_SAMPLES} are needed",
                self.n
            )));
        }
        Ok(McEstimate {
            mean: self.mean(),
            half_width_95: 1.96 * (self.variance() / self.n as f64).sqrt(),
            n_samples: self.n,
        })
    }
}

/// Window size, deployment count and root seed of a Monte Carlo run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McSettings {
    pub half_width: f64,
    pub n_deployments: usize,
    pub root_seed: u64,
}

impl McSettings {
    pub fn new(half_width: f64, n_deployments: usize, root_seed: u64) -> Result<Self> {
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(Error::Degenerate(format!("window half-width must be positive, got {half_width}")));
        }
        if n_deployments == 0 {
            return Err(Error::Degenerate("at least one deployment is required".into()));
        }
        Ok(Self { half_width, n_deployments, root_seed })
    }
}

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of deployment `i`: splitmix64(root + (i + 1) * golden).
pub fn deployment_seed(root: u64, i: usize) -> u64 {
    splitmix64(root.wrapping_add((i as u64 + 1).wrapping_mul(GOLDEN)))
}

/// Runs `f` on every deployment seed in parallel and returns results in deployment order.
pub fn run_deployments<T, F>(settings: &McSettings, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync,
{
    (0..settings.n_deployments)
        .into_par_iter()
        .map(|i| f(deployment_seed(settings.root_seed, i)))
        .collect()
}
