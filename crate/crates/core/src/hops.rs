//! Bounds on the number of aggregation stages.

use crate::error::{domain, Error, Result};
use crate::model::NetworkConfig;
use crate::rate::{load_pmf_auto, thinning_probability};
use crate::specfun::c_alpha;

/// Cap on the ascending scan of [`k_lower_fixed_point`].
pub const MAX_STAGES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HopBounds {
    pub k_upper: usize,
    pub k_lower: usize,
    pub epsilon: f64,
    pub t: f64,
}

/// Per-hop SIR coverage supplied to the upper bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HopCoverage<'a> {
    /// Coverage of each stage at the threshold of interest.
    PerStage(&'a [f64]),
    /// Uncapped transmit power: the density-free closed form at threshold `t`.
    OpenLoop { t: f64 },
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon < 1.0 {
        Ok(())
    } else {
        Err(domain(format!("outage budget must lie in (0, 1), got {epsilon}")))
    }
}

/// Largest K with joint coverage at least 1 - ε when each hop succeeds with at most max_k P_k.
pub fn k_upper_bound(cfg: &NetworkConfig, coverage: HopCoverage<'_>, epsilon: f64) -> Result<usize> {
    check_epsilon(epsilon)?;
    let budget = -(-epsilon).ln_1p();
    let per_hop = match coverage {
        HopCoverage::PerStage(p) => {
            if p.is_empty() {
                return Err(domain("no stage coverage supplied"));
            }
            if let Some(v) = p.iter().find(|v| !(0.0..=1.0).contains(*v)) {
                return Err(domain(format!("coverage outside [0, 1]: {v}")));
            }
            let best = p.iter().copied().fold(0.0, f64::max);
            -best.ln()
        }
        HopCoverage::OpenLoop { t } => {
            if !(t > 0.0) {
                return Err(domain(format!("SIR threshold must be positive, got {t}")));
            }
            2.0 * t * c_alpha(cfg.alpha, t)? / (cfg.alpha - 2.0)
        }
    };
    if per_hop == 0.0 {
        return Err(Error::Unbounded("per-hop coverage is 1, so any number of stages meets the budget".into()));
    }
    Ok(((budget / per_hop).ceil() as usize).max(1))
}

/// Mean total length of the links into a typical aggregator, λ_u / (2 λ_a^{3/2}).
pub fn mean_connection_length(lambda_u: f64, lambda_a: f64) -> f64 {
    lambda_u / (2.0 * lambda_a.powf(1.5))
}

/// E[1/N_a | N_a ≥ 1] from the load law.
pub fn mean_inverse_load(lambda_u: f64, lambda_a: f64) -> Result<f64> {
    let pmf = load_pmf_auto(lambda_u, lambda_a)?;
    let p_th = thinning_probability(pmf.mean_na);
    if p_th == 0.0 {
        return Err(domain("cells are always empty; inverse load undefined"));
    }
    Ok(pmf.probs.iter().enumerate().skip(1).map(|(l, p)| p / l as f64).sum::<f64>() / p_th)
}

fn range_ratio(cfg: &NetworkConfig, p_r_min: f64) -> Result<Option<f64>> {
    if !(p_r_min > 0.0) {
        return Err(domain(format!("minimum received power must be positive, got {p_r_min}")));
    }
    if cfg.p_t_max.is_infinite() {
        return Ok(None);
    }
    if p_r_min >= cfg.p_t_max {
        return Err(domain(format!("minimum received power {p_r_min} must be below P_Tmax {}", cfg.p_t_max)));
    }
    Ok(Some((p_r_min / cfg.p_t_max).powf(1.0 / cfg.alpha)))
}

/// Smallest K compatible with the maximum transmit range.
pub fn k_lower_bound(cfg: &NetworkConfig, lambda_u: f64, lambda_a: f64, p_r_min: f64) -> Result<usize> {
    let Some(ratio) = range_ratio(cfg, p_r_min)? else {
        return Ok(1);
    };
    let v = mean_connection_length(lambda_u, lambda_a) * mean_inverse_load(lambda_u, lambda_a)? * ratio;
    Ok((v.ceil() as usize).max(1))
}

/// Same bound with E[1/N_a] replaced by 1/E[N_a].
pub fn k_lower_bound_jensen(cfg: &NetworkConfig, lambda_u: f64, lambda_a: f64, p_r_min: f64) -> Result<usize> {
    let Some(ratio) = range_ratio(cfg, p_r_min)? else {
        return Ok(1);
    };
    let v = mean_connection_length(lambda_u, lambda_a) * lambda_a / lambda_u * ratio;
    Ok((v.ceil() as usize).max(1))
}

/// Smallest K ≤ 64 satisfying the self-consistent lower bound in which the mean
/// link length grows with K.
pub fn k_lower_fixed_point(cfg: &NetworkConfig, gamma: f64, p_r_min: f64) -> Result<usize> {
    if !(gamma > 0.0 && gamma < 0.5) {
        return Err(domain(format!("gamma must lie in (0, 0.5), got {gamma}")));
    }
    let Some(ratio) = range_ratio(cfg, p_r_min)? else {
        return Ok(1);
    };
    let inv_load = gamma / (1.0 - gamma);
    for k in 1..=MAX_STAGES {
        let length = (1.0 - gamma) / (2.0 * cfg.lambda.sqrt() * gamma.powf(k as f64 / 2.0 + 1.0));
        let bound = (inv_load * length * ratio).ceil();
        if bound <= k as f64 {
            return Ok(k);
        }
    }
    Err(Error::Unbounded(format!("no stage count up to {MAX_STAGES} satisfies the lower bound")))
}

pub fn hop_bounds(
    cfg: &NetworkConfig,
    coverage: HopCoverage<'_>,
    epsilon: f64,
    t: f64,
    lambda_u: f64,
    lambda_a: f64,
    p_r_min: f64,
) -> Result<HopBounds> {
    Ok(HopBounds {
        k_upper: k_upper_bound(cfg, coverage, epsilon)?,
        k_lower: k_lower_bound(cfg, lambda_u, lambda_a, p_r_min)?,
        epsilon,
        t,
    })
}
