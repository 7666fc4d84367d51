//! Cell load law, rate coverage per transmission mode, and expected delay.

use crate::coverage::ModeCoverage;
use crate::energy::LOAD_SHAPE;
use crate::error::{domain, Error, Result};
use crate::model::{build_stage_plan, NetworkConfig, StagePlan, TransmissionMode};
use crate::quad::{integrate, QuadOptions};
use crate::specfun::ln_gamma;

/// Default load truncation.
pub const DEFAULT_L_MAX: usize = 20;
/// Largest tail mass accepted by [`load_pmf`].
pub const MAX_TAIL_MASS: f64 = 1e-4;
/// Tail mass targeted by [`auto_l_max`].
pub const AUTO_TAIL_MASS: f64 = 1e-6;

/// Distribution of the number of devices served by one aggregator.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadPmf {
    pub probs: Vec<f64>,
    pub mean_na: f64,
    pub l_max: usize,
    pub tail_mass: f64,
}

impl LoadPmf {
    pub fn mean(&self) -> f64 {
        self.probs.iter().enumerate().map(|(l, p)| l as f64 * p).sum()
    }

    pub fn second_moment(&self) -> f64 {
        self.probs.iter().enumerate().map(|(l, p)| (l * l) as f64 * p).sum()
    }
}

/// P(N_a = 0) = (3.5 / (3.5 + μ))^3.5.
pub fn idle_probability(mu: f64) -> f64 {
    (LOAD_SHAPE * (LOAD_SHAPE / (LOAD_SHAPE + mu)).ln()).exp()
}

/// Probability that a cell with mean load `mu` is nonempty.
pub fn thinning_probability(mu: f64) -> f64 {
    -(LOAD_SHAPE * (LOAD_SHAPE / (LOAD_SHAPE + mu)).ln()).exp_m1()
}

/// Probability generating function of the load, E[z^N_a].
pub fn load_pgf(mu: f64, z: f64) -> f64 {
    (LOAD_SHAPE / (LOAD_SHAPE + (1.0 - z) * mu)).powf(LOAD_SHAPE)
}

fn log_probs(mu: f64, l_max: usize) -> Vec<f64> {
    if mu == 0.0 {
        let mut v = vec![0.0; l_max + 1];
        v[0] = 1.0;
        return v;
    }
    let lq = (mu / (LOAD_SHAPE + mu)).ln();
    let mut lp = LOAD_SHAPE * (LOAD_SHAPE / (LOAD_SHAPE + mu)).ln();
    let mut out = Vec::with_capacity(l_max + 1);
    for l in 0..=l_max {
        out.push(lp.exp());
        let lf = l as f64;
        lp += ((LOAD_SHAPE + lf) / (lf + 1.0)).ln() + lq;
    }
    out
}

/// Load PMF over 0..=l_max; errors when the neglected tail exceeds 1e-4.
pub fn load_pmf(lambda_u: f64, lambda_a: f64, l_max: usize) -> Result<LoadPmf> {
    if !(lambda_a > 0.0) || !(lambda_u >= 0.0) {
        return Err(domain(format!("invalid densities λ_u = {lambda_u}, λ_a = {lambda_a}")));
    }
    if l_max < 1 {
        return Err(domain("l_max must be at least 1"));
    }
    let mu = lambda_u / lambda_a;
    let probs = log_probs(mu, l_max);
    let tail_mass = (1.0 - probs.iter().sum::<f64>()).max(0.0);
    if tail_mass > MAX_TAIL_MASS {
        return Err(Error::Truncation { l_max, mass: tail_mass });
    }
    Ok(LoadPmf { probs, mean_na: mu, l_max, tail_mass })
}

/// Smallest truncation at or above the default whose tail mass is below 1e-6.
pub fn auto_l_max(mu: f64) -> usize {
    if mu == 0.0 {
        return DEFAULT_L_MAX;
    }
    let lq = (mu / (LOAD_SHAPE + mu)).ln();
    let mut lp = LOAD_SHAPE * (LOAD_SHAPE / (LOAD_SHAPE + mu)).ln();
    let mut cdf = 0.0;
    let mut l = 0usize;
    loop {
        cdf += lp.exp();
        if l >= DEFAULT_L_MAX && 1.0 - cdf < AUTO_TAIL_MASS {
            return l;
        }
        let lf = l as f64;
        lp += ((LOAD_SHAPE + lf) / (lf + 1.0)).ln() + lq;
        l += 1;
        if l > 100_000_000 {
            return l;
        }
    }
}

/// Load PMF at the automatic truncation.
pub fn load_pmf_auto(lambda_u: f64, lambda_a: f64) -> Result<LoadPmf> {
    if !(lambda_a > 0.0) {
        return Err(domain(format!("aggregator density must be positive, got {lambda_a}")));
    }
    load_pmf(lambda_u, lambda_a, auto_l_max(lambda_u / lambda_a))
}

/// Closed-form log PMF, used to cross-check the recurrence.
pub fn load_log_prob(mu: f64, l: usize) -> f64 {
    let lf = l as f64;
    ln_gamma(LOAD_SHAPE + lf) - ln_gamma(LOAD_SHAPE) - ln_gamma(lf + 1.0)
        + LOAD_SHAPE * (LOAD_SHAPE / (LOAD_SHAPE + mu)).ln()
        + lf * (mu / (LOAD_SHAPE + mu)).ln()
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateCoverage {
    pub probability: f64,
    pub per_stage: Vec<f64>,
    /// Largest neglected load-tail mass over the stages.
    pub truncation_mass: f64,
}

/// Exponent `c` such that a hop serving `l` devices needs SIR above 2^{c l} - 1.
fn rate_exponent(cfg: &NetworkConfig, plan: &StagePlan, mode: TransmissionMode, rho: f64) -> f64 {
    let share = match mode {
        TransmissionMode::Sequential => plan.k_total as f64,
        TransmissionMode::FullDuplexParallel => 1.0,
        TransmissionMode::HalfDuplexParallel => 2.0,
    };
    share * rho / cfg.w
}

/// Rate coverage evaluator holding per-stage load laws.
#[derive(Debug, Clone)]
pub struct RateModel<'a> {
    cfg: &'a NetworkConfig,
    plan: &'a StagePlan,
    sir: ModeCoverage<'a>,
    stages: Vec<usize>,
    pmfs: Vec<LoadPmf>,
}

impl<'a> RateModel<'a> {
    /// `l_max = None` picks the smallest truncation ≥ 20 with tail mass below 1e-6.
    pub fn new(cfg: &'a NetworkConfig, plan: &'a StagePlan, mode: TransmissionMode, l_max: Option<usize>) -> Result<Self> {
        let sir = ModeCoverage::new(cfg, plan, mode)?;
        let stages = sir.stages();
        let pmfs = stages
            .iter()
            .map(|&k| {
                let s = plan.stage(k)?;
                match l_max {
                    Some(l) => load_pmf(s.lambda_u, s.lambda_a, l),
                    None => load_pmf_auto(s.lambda_u, s.lambda_a),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { cfg, plan, sir, stages, pmfs })
    }

    pub fn mode(&self) -> TransmissionMode {
        self.sir.mode()
    }

    pub fn coverage(&self, rho: f64) -> Result<RateCoverage> {
        if !(rho > 0.0) {
            return Err(domain(format!("rate threshold must be positive, got {rho}")));
        }
        let c = rate_exponent(self.cfg, self.plan, self.mode(), rho);
        let mut per_stage = Vec::with_capacity(self.stages.len());
        for (&k, pmf) in self.stages.iter().zip(&self.pmfs) {
            let mut sum = pmf.probs[0];
            for (l, &p) in pmf.probs.iter().enumerate().skip(1) {
                let t = (c * l as f64).exp2() - 1.0;
                let cov = self.sir.stage_coverage(k, t)?;
                sum += p * cov;
                if cov < 1e-13 {
                    break;
                }
            }
            per_stage.push(sum.min(1.0));
        }
        let truncation_mass = self.pmfs.iter().map(|p| p.tail_mass).fold(0.0, f64::max);
        Ok(RateCoverage { probability: per_stage.iter().product(), per_stage, truncation_mass })
    }
}

/// P(R > ρ) under the given mode.
pub fn rate_coverage(
    cfg: &NetworkConfig,
    plan: &StagePlan,
    mode: TransmissionMode,
    rho: f64,
    l_max: Option<usize>,
) -> Result<RateCoverage> {
    RateModel::new(cfg, plan, mode, l_max)?.coverage(rho)
}

/// How the conditional expectations of the delay are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DelayConvention {
    /// ∫_0^{1/ρ} [1 - P(R ≥ 1/t)] dt, without dividing by P(R > ρ).
    AsPrinted,
    /// ∫_0^{1/ρ} [P(R > ρ) - P(R ≥ 1/t)] dt / P(R > ρ), a proper conditional mean.
    Conditional,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DelayEstimate {
    /// Expected transfer time over all hops (seconds).
    pub expected_duration: f64,
    /// Duration minus the direct single-hop duration (seconds).
    pub expected_delay: f64,
    pub direct_duration: f64,
    pub convention: DelayConvention,
}

fn inverse_rate_integral(model: &RateModel<'_>, rho: f64, convention: DelayConvention) -> Result<f64> {
    let q_rho = model.coverage(rho)?.probability;
    let base = match convention {
        DelayConvention::AsPrinted => 1.0,
        DelayConvention::Conditional => q_rho,
    };
    if base == 0.0 {
        return Err(Error::Unbounded(format!("rate coverage at ρ = {rho} is zero; conditional delay undefined")));
    }
    let opts = QuadOptions { abs_tol: 1e-12 / rho, rel_tol: 1e-7, max_intervals: 500 };
    let v = integrate(
        |t| Ok(base - model.coverage(1.0 / t)?.probability),
        0.0,
        1.0 / rho,
        opts,
    )?;
    Ok(v / base)
}

/// Expected transfer duration and delay relative to direct transmission, at rate floor ρ.
pub fn expected_conditional_delay(
    cfg: &NetworkConfig,
    plan: &StagePlan,
    mode: TransmissionMode,
    rho: f64,
    convention: DelayConvention,
) -> Result<DelayEstimate> {
    if !(rho > 0.0) {
        return Err(domain(format!("rate threshold must be positive, got {rho}")));
    }
    let direct_plan = build_stage_plan(cfg, plan.gamma, 1)?;
    let direct_model = RateModel::new(cfg, &direct_plan, TransmissionMode::Sequential, None)?;
    let direct_duration = cfg.m_payload * inverse_rate_integral(&direct_model, rho, convention)?;
    if plan.k_total == 1 {
        return Ok(DelayEstimate { expected_duration: direct_duration, expected_delay: 0.0, direct_duration, convention });
    }
    let model = RateModel::new(cfg, plan, mode, None)?;
    let expected_duration = cfg.m_payload * plan.k_total as f64 * inverse_rate_integral(&model, rho, convention)?;
    Ok(DelayEstimate {
        expected_duration,
        expected_delay: expected_duration - direct_duration,
        direct_duration,
        convention,
    })
}
