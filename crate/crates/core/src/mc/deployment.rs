//! PPP deployments thinned into disjoint aggregator tiers.

use std::f64::consts::PI;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

use super::spatial::{GridIndex, Point};
use crate::error::{Error, Result};
use crate::model::{NetworkConfig, StagePlan};

/// Role a point plays in the hierarchy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tier {
    /// Device that only transmits its own payload at stage 1.
    Transmitter,
    /// Device elected as a stage-k aggregator, 1 ≤ k < K.
    Aggregator(usize),
    BaseStation,
}

/// Transmitters, receivers and association of one stage.
#[derive(Debug, Clone, PartialEq)]
pub struct StageLayout {
    /// Point indices of the transmitters. For k ≥ 2 these are the stage-(k-1)
    /// receivers, in the same order.
    pub transmitters: Vec<u32>,
    /// Point indices of the receivers.
    pub receivers: Vec<u32>,
    /// Serving receiver of each transmitter, as an index into `receivers`.
    pub assoc: Vec<u32>,
    /// Transmitters of each receiver (indices into `transmitters`) in TDMA order.
    pub members: Vec<Vec<u32>>,
    /// Whether each receiver lies in the guarded inner window.
    pub interior: Vec<bool>,
    pub lambda_a: f64,
    pub guard: f64,
}

impl StageLayout {
    pub fn load(&self, receiver: usize) -> usize {
        self.members[receiver].len()
    }

    /// Area of the guarded inner window, zero when the guard swallows it.
    pub fn interior_area(&self, half_width: f64) -> f64 {
        (2.0 * (half_width - self.guard)).max(0.0).powi(2)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Deployment {
    pub region_half_width: f64,
    pub seed: u64,
    /// Devices first, then base stations.
    pub points: Vec<Point>,
    pub n_devices: usize,
    pub tier_of: Vec<Tier>,
    pub stages: Vec<StageLayout>,
}

impl Deployment {
    pub fn k_total(&self) -> usize {
        self.stages.len()
    }

    /// Stage `k`, 1-based.
    pub fn stage(&self, k: usize) -> &StageLayout {
        &self.stages[k - 1]
    }

    /// Multiplies every stage's guard width by `factor` and recomputes which
    /// receivers are interior.
    pub fn scale_guards(&mut self, factor: f64) {
        for s in &mut self.stages {
            s.guard *= factor;
            let inner = self.region_half_width - s.guard;
            s.interior = s.receivers.iter().map(|&r| inside(self.points[r as usize], inner)).collect();
        }
    }

    pub fn distance(&self, a: u32, b: u32) -> f64 {
        let (p, q) = (self.points[a as usize], self.points[b as usize]);
        (p[0] - q[0]).hypot(p[1] - q[1])
    }
}

/// Guard width for a receiver tier: three mean nearest-neighbour spacings.
pub fn guard_width(lambda_a: f64) -> f64 {
    3.0 / (PI * lambda_a).sqrt()
}

/// A message when the last receiver tier is too sparse for the window.
pub fn region_warning(plan: &StagePlan, half_width: f64) -> Option<String> {
    let lambda_k = plan.stages.last()?.lambda_a;
    let expected = lambda_k * (2.0 * half_width).powi(2);
    (expected < 10.0).then(|| {
        format!("only {expected:.1} stage-{} receivers expected in the window; widen it", plan.k_total)
    })
}

fn inside(p: Point, inner: f64) -> bool {
    p[0].abs() < inner && p[1].abs() < inner
}

fn poisson(rng: &mut ChaCha8Rng, mean: f64) -> Result<usize> {
    if mean == 0.0 {
        return Ok(0);
    }
    let d = Poisson::new(mean).map_err(|e| Error::Degenerate(format!("poisson mean {mean}: {e}")))?;
    Ok(d.sample(rng) as usize)
}

/// Draws a deployment: a PPP of devices split into tiers with the plan's
/// masses, an independent BS PPP, nearest-receiver association per stage and
/// a random TDMA order inside every cell.
pub fn sample_deployment(cfg: &NetworkConfig, plan: &StagePlan, half_width: f64, seed: u64) -> Result<Deployment> {
    if !(half_width > 0.0 && half_width.is_finite()) {
        return Err(Error::Degenerate(format!("window half-width must be positive, got {half_width}")));
    }
    let k_total = plan.k_total;
    let area = (2.0 * half_width).powi(2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let n_devices = poisson(&mut rng, cfg.lambda * area)?;
    let n_bs = poisson(&mut rng, cfg.lambda_bs * area)?;
    let mut points = Vec::with_capacity(n_devices + n_bs);
    let mut tier_of = Vec::with_capacity(n_devices + n_bs);
    // Cumulative masses γ, γ + γ², ... of aggregator tiers 1..K-1.
    let cum: Vec<f64> = (1..k_total)
        .scan(0.0, |acc, k| {
            *acc += plan.gamma.powi(k as i32);
            Some(*acc)
        })
        .collect();
    for _ in 0..n_devices {
        let p = [rng.random_range(-half_width..half_width), rng.random_range(-half_width..half_width)];
        let u: f64 = rng.random();
        let tier = match cum.iter().position(|&c| u < c) {
            Some(j) => Tier::Aggregator(j + 1),
            None => Tier::Transmitter,
        };
        points.push(p);
        tier_of.push(tier);
    }
    for _ in 0..n_bs {
        points.push([rng.random_range(-half_width..half_width), rng.random_range(-half_width..half_width)]);
        tier_of.push(Tier::BaseStation);
    }

    let mut stages = Vec::with_capacity(k_total);
    let mut transmitters: Vec<u32> =
        (0..n_devices as u32).filter(|&i| tier_of[i as usize] == Tier::Transmitter).collect();
    for k in 1..=k_total {
        let want = if k < k_total { Tier::Aggregator(k) } else { Tier::BaseStation };
        let receivers: Vec<u32> = (0..points.len() as u32).filter(|&i| tier_of[i as usize] == want).collect();
        if receivers.is_empty() {
            return Err(Error::Degenerate(format!("no stage-{k} receivers in the window; widen it")));
        }
        let index = GridIndex::new(receivers.iter().map(|&i| points[i as usize]).collect(), half_width);
        let assoc: Vec<u32> =
            transmitters.iter().map(|&t| index.nearest(points[t as usize]).expect("nonempty index")).collect();
        let mut members = vec![Vec::new(); receivers.len()];
        for (j, &r) in assoc.iter().enumerate() {
            members[r as usize].push(j as u32);
        }
        for m in &mut members {
            m.shuffle(&mut rng);
        }
        let lambda_a = plan.stages[k - 1].lambda_a;
        let guard = guard_width(lambda_a);
        let inner = half_width - guard;
        let interior = receivers.iter().map(|&r| inside(points[r as usize], inner)).collect();
        let next = receivers.clone();
        stages.push(StageLayout { transmitters, receivers, assoc, members, interior, lambda_a, guard });
        transmitters = next;
    }
    Ok(Deployment { region_half_width: half_width, seed, points, n_devices, tier_of, stages })
}
