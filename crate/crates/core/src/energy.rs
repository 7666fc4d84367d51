//! Closed-form energy: uplink amplifier power, received power, per-stage cost
//! and the aggregator-fraction optimizer.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::model::{build_stage_plan, critical_distance, NetworkConfig, StagePlan};
use crate::specfun::{gamma, lower_incomplete_gamma, upper_incomplete_gamma};

/// Shape of the gamma law used for normalized Voronoi cell areas.
pub const LOAD_SHAPE: f64 = 3.5;

fn check_densities(lambda_u: f64, lambda_a: f64) -> Result<()> {
    if !(lambda_a > 0.0 && lambda_a.is_finite()) {
        return Err(domain(format!("aggregator density must be positive, got {lambda_a}")));
    }
    if !(lambda_u >= 0.0 && lambda_u.is_finite()) {
        return Err(domain(format!("transmitter density must be nonnegative, got {lambda_u}")));
    }
    Ok(())
}

/// Mean total amplifier power of the devices served by a typical aggregator.
pub fn mean_uplink_power(cfg: &NetworkConfig, lambda_u: f64, lambda_a: f64) -> Result<f64> {
    check_densities(lambda_u, lambda_a)?;
    if lambda_u == 0.0 || cfg.p_bar_t == 0.0 {
        return Ok(0.0);
    }
    let a = cfg.alpha;
    let pl = PI * lambda_a;
    let scale = PI * lambda_u * cfg.p_bar_t / (cfg.eta * pl.powf(1.0 + a / 2.0));
    let rc = critical_distance(cfg);
    if rc.is_infinite() {
        return Ok(scale * gamma(a / 2.0 + 1.0));
    }
    let x = pl * rc.r_c().powi(2);
    let inverted = scale * lower_incomplete_gamma(a / 2.0 + 1.0, x)?;
    let capped = lambda_u * cfg.p_t_max / (cfg.eta * lambda_a) * (-x).exp();
    Ok(inverted + capped)
}

/// Mean total received power at a typical aggregator.
pub fn mean_received_power(cfg: &NetworkConfig, lambda_u: f64, lambda_a: f64) -> Result<f64> {
    check_densities(lambda_u, lambda_a)?;
    let ratio = lambda_u / lambda_a;
    let rc = critical_distance(cfg);
    if rc.is_infinite() {
        return Ok(ratio * cfg.p_bar_t);
    }
    let pl = PI * lambda_a;
    let x = pl * rc.r_c().powi(2);
    let inverted = ratio * (-(-x).exp_m1()) * cfg.p_bar_t;
    let capped = PI * lambda_u * pl.powf(cfg.alpha / 2.0 - 1.0) * cfg.p_t_max
        * upper_incomplete_gamma(1.0 - cfg.alpha / 2.0, x)?;
    Ok(inverted + capped)
}

/// E[N_a] = λ_u / λ_a.
pub fn mean_na(lambda_u: f64, lambda_a: f64) -> Result<f64> {
    check_densities(lambda_u, lambda_a)?;
    Ok(lambda_u / lambda_a)
}

/// Mean number of served devices within distance `d` of the aggregator.
pub fn mean_na_within(lambda_u: f64, lambda_a: f64, d: f64) -> Result<f64> {
    check_densities(lambda_u, lambda_a)?;
    if !(d >= 0.0) {
        return Err(domain(format!("distance must be nonnegative, got {d}")));
    }
    Ok(lambda_u / lambda_a * (-(-lambda_a * PI * d * d).exp_m1()))
}

/// E[N_a²] = μ + (1 + 1/3.5) μ².
pub fn second_moment_na(lambda_u: f64, lambda_a: f64) -> Result<f64> {
    check_densities(lambda_u, lambda_a)?;
    let mu = lambda_u / lambda_a;
    Ok(mu + (LOAD_SHAPE + 1.0) / LOAD_SHAPE * mu * mu)
}

/// Energy density spent at stage `k` (1-based) when every upstream hop succeeds.
pub fn stage_cost(cfg: &NetworkConfig, plan: &StagePlan, k: usize) -> Result<f64> {
    let s = plan.stage(k)?;
    let pa = mean_uplink_power(cfg, s.lambda_u, s.lambda_a)?;
    let lo_load = s.lambda_a * second_moment_na(s.lambda_u, s.lambda_a)?;
    Ok(s.t_tx * (s.lambda_u * cfg.p_c() + s.lambda_a * pa + lo_load * cfg.p_lo))
}

/// Cumulative success probabilities P_cov(0..K-1) with P_cov(0) = 1.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageVector {
    p_cov: Vec<f64>,
}

impl CoverageVector {
    /// Entry `k` is P_cov(k); the first entry must be 1.
    pub fn new(p_cov: Vec<f64>) -> Result<Self> {
        if p_cov.is_empty() {
            return Err(domain("coverage vector is empty"));
        }
        if p_cov[0] != 1.0 {
            return Err(domain(format!("P_cov(0) must be 1, got {}", p_cov[0])));
        }
        if let Some(v) = p_cov.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(domain(format!("coverage entries must lie in [0, 1], got {v}")));
        }
        Ok(Self { p_cov })
    }

    pub fn ones(k_total: usize) -> Self {
        Self { p_cov: vec![1.0; k_total] }
    }

    /// Running product of per-stage success probabilities, truncated to `k_total` entries.
    pub fn from_stage_probs(per_stage: &[f64], k_total: usize) -> Result<Self> {
        let mut v = Vec::with_capacity(k_total);
        let mut acc = 1.0;
        v.push(acc);
        for p in per_stage.iter().take(k_total.saturating_sub(1)) {
            acc *= p;
            v.push(acc);
        }
        if v.len() != k_total {
            return Err(domain(format!("need {} stage probabilities, got {}", k_total - 1, per_stage.len())));
        }
        Self::new(v)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.p_cov
    }

    pub fn len(&self) -> usize {
        self.p_cov.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p_cov.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnergyBreakdown {
    pub per_stage: Vec<f64>,
    pub total: f64,
    pub coverage_scaled: bool,
}

impl EnergyBreakdown {
    pub fn from_stages(per_stage: Vec<f64>, coverage_scaled: bool) -> Self {
        let total = per_stage.iter().sum();
        Self { per_stage, total, coverage_scaled }
    }
}

pub fn total_energy_density(cfg: &NetworkConfig, plan: &StagePlan, cov: &CoverageVector) -> Result<EnergyBreakdown> {
    if cov.len() != plan.k_total {
        return Err(domain(format!("coverage vector has {} entries, plan has {} stages", cov.len(), plan.k_total)));
    }
    let scaled = cov.as_slice().iter().any(|&p| p != 1.0);
    let per_stage = (1..=plan.k_total)
        .map(|k| Ok(cov.as_slice()[k - 1] * stage_cost(cfg, plan, k)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(EnergyBreakdown::from_stages(per_stage, scaled))
}

/// Whether the last-stage cost rises with γ over the whole search grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Precondition {
    Holds,
    /// First grid value of γ at which the last-stage cost failed to increase.
    Fails { at_gamma: f64 },
    /// K = 1: the objective does not depend on γ.
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GammaOptimum {
    pub gamma_opt: f64,
    pub energy: EnergyBreakdown,
    pub bracket: (f64, f64),
    pub precondition: Precondition,
}

pub const GAMMA_GRID_POINTS: usize = 512;
pub const GAMMA_LOWER: f64 = 1e-3;
pub const GAMMA_UPPER: f64 = 0.5 - 1e-3;

/// Feasible search interval for γ at `k_total` stages.
pub fn gamma_bracket(cfg: &NetworkConfig, k_total: usize) -> Result<(f64, f64)> {
    cfg.validate()?;
    if k_total == 0 {
        return Err(domain("at least one stage is required"));
    }
    let mut lo = GAMMA_LOWER;
    if k_total > 1 {
        let feasible = (cfg.lambda_bs / cfg.lambda).powf(1.0 / (k_total - 1) as f64) * (1.0 + 1e-9);
        lo = lo.max(feasible);
    }
    if lo >= GAMMA_UPPER {
        return Err(Error::Optimizer(format!("no feasible gamma for K = {k_total}: lower end {lo} exceeds {GAMMA_UPPER}")));
    }
    Ok((lo, GAMMA_UPPER))
}

/// Log-uniform search grid used by [`optimize_gamma`].
pub fn gamma_grid(cfg: &NetworkConfig, k_total: usize, points: usize) -> Result<Vec<f64>> {
    let (lo, hi) = gamma_bracket(cfg, k_total)?;
    let (llo, lhi) = (lo.ln(), hi.ln());
    Ok((0..points).map(|i| (llo + (lhi - llo) * i as f64 / (points - 1) as f64).exp()).collect())
}

/// Minimize total energy density over γ: dense log grid, then golden-section refinement.
pub fn optimize_gamma<F>(cfg: &NetworkConfig, k_total: usize, cov_rule: F) -> Result<GammaOptimum>
where
    F: Fn(&StagePlan) -> Result<CoverageVector> + Sync,
{
    let grid = gamma_grid(cfg, k_total, GAMMA_GRID_POINTS)?;
    let objective = |g: f64| -> Result<(f64, f64)> {
        let plan = build_stage_plan(cfg, g, k_total)?;
        let e = total_energy_density(cfg, &plan, &cov_rule(&plan)?)?;
        Ok((e.total, stage_cost(cfg, &plan, k_total)?))
    };
    let values = grid.par_iter().map(|&g| objective(g)).collect::<Result<Vec<_>>>()?;

    let precondition = if k_total == 1 {
        Precondition::NotApplicable
    } else {
        match values.windows(2).position(|w| w[1].1 <= w[0].1) {
            None => Precondition::Holds,
            Some(i) => Precondition::Fails { at_gamma: grid[i + 1] },
        }
    };

    let best = values
        .iter()
        .enumerate()
        .fold(0, |b, (i, v)| if v.0 < values[b].0 { i } else { b });
    let (mut lo, mut hi) = (grid[best.saturating_sub(1)], grid[(best + 1).min(grid.len() - 1)]);
    if !(hi > lo) {
        return Err(Error::Optimizer(format!("degenerate bracket [{lo}, {hi}]")));
    }
    let bracket = (lo, hi);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = objective(x1)?.0;
    let mut f2 = objective(x2)?.0;
    let mut iterations = 0;
    while hi - lo > 1e-5 {
        iterations += 1;
        if iterations > 200 {
            return Err(Error::Optimizer("golden-section refinement did not converge".into()));
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = objective(x1)?.0;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = objective(x2)?.0;
        }
    }
    let refined = 0.5 * (lo + hi);
    let gamma_opt = if objective(refined)?.0 <= values[best].0 { refined } else { grid[best] };
    let plan = build_stage_plan(cfg, gamma_opt, k_total)?;
    let energy = total_energy_density(cfg, &plan, &cov_rule(&plan)?)?;
    Ok(GammaOptimum { gamma_opt, energy, bracket, precondition })
}
