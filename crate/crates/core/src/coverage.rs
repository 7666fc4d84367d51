//! Analytic SIR coverage under truncated channel inversion: interference
//! Laplace transforms for one tier and for stacked tiers transmitting together.

use std::f64::consts::PI;

use crate::error::{domain, Result};
use crate::model::{critical_distance, NetworkConfig, StagePlan, TransmissionMode};
use crate::quad::{integrate, QuadOptions};
use crate::rate::thinning_probability;
use crate::specfun::{b_alpha, c_alpha, lower_incomplete_gamma, upper_incomplete_gamma};

/// Rayleigh tail integrals stop where the remaining mass is below 1e-12.
const TAIL_SPAN: f64 = 27.631_021_115_928_547;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaplaceEval {
    pub s: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StageCoverage {
    /// 1-based indices of the stages entering the product.
    pub stages: Vec<usize>,
    pub per_stage: Vec<f64>,
    /// Running products of `per_stage`.
    pub joint: Vec<f64>,
}

impl StageCoverage {
    fn new(stages: Vec<usize>, per_stage: Vec<f64>) -> Self {
        let mut acc = 1.0;
        let joint = per_stage
            .iter()
            .map(|p| {
                acc *= p;
                acc
            })
            .collect();
        Self { stages, per_stage, joint }
    }

    /// End-to-end coverage (last running product).
    pub fn total(&self) -> f64 {
        self.joint.last().copied().unwrap_or(1.0)
    }
}

fn opts() -> QuadOptions {
    QuadOptions { abs_tol: 1e-13, rel_tol: 1e-9, max_intervals: 400 }
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && !v.is_nan() {
        Ok(())
    } else {
        Err(domain(format!("{name} must be positive, got {v}")))
    }
}

/// ∫_{r_c}^∞ h(r) f_R(r) dr for R Rayleigh with σ² = 1/(2πλ), via v = πλ(r² - r_c²).
fn rayleigh_tail<F>(lambda: f64, rc: f64, mut h: F) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if rc.is_infinite() {
        return Ok(0.0);
    }
    let pl = PI * lambda;
    let weight = (-pl * rc * rc).exp();
    if weight == 0.0 {
        return Ok(0.0);
    }
    let rc2 = rc * rc;
    let inner = integrate(|v| Ok(h((rc2 + v / pl).sqrt())? * (-v).exp()), 0.0, TAIL_SPAN, opts())?;
    Ok(weight * inner)
}

/// 1 - e^{-x}(1 + x) with x = πλ r_c².
fn inner_mass(lambda: f64, rc: f64) -> Result<f64> {
    if lambda == 0.0 {
        return Ok(0.0);
    }
    if rc.is_infinite() {
        return Ok(1.0);
    }
    lower_incomplete_gamma(2.0, PI * lambda * rc * rc)
}

/// Interferer field seen by a receiver: `eff` is the density of active
/// interfering cells, `assoc` the aggregator density fixing their link distances.
#[derive(Debug, Clone, Copy)]
struct Field {
    eff: f64,
    assoc: f64,
}

fn intra_exponent(cfg: &NetworkConfig, f: Field, s: f64) -> Result<f64> {
    if f.eff == 0.0 || s == 0.0 {
        return Ok(0.0);
    }
    let a = cfg.alpha;
    let rc = critical_distance(cfg).r_c();
    let mut e = inner_mass(f.eff, rc)? * cfg.p_bar_t * c_alpha(a, s * cfg.p_bar_t)?;
    if rc.is_finite() {
        let pt = cfg.p_t_max;
        let j = rayleigh_tail(f.assoc, rc, |r| Ok(r.powf(2.0 - a) * c_alpha(a, s * pt * r.powf(-a))?))?;
        e += PI * f.eff * pt * j;
    }
    Ok(2.0 * s / (a - 2.0) * e)
}

fn inter_exponent(cfg: &NetworkConfig, f: Field, s: f64) -> Result<f64> {
    if f.eff == 0.0 || s == 0.0 {
        return Ok(0.0);
    }
    let a = cfg.alpha;
    let rc = critical_distance(cfg).r_c();
    let sp = s * cfg.p_bar_t;
    let mut e = inner_mass(f.eff, rc)? * (b_alpha(a, sp)? + 2.0 * sp / (a - 2.0) * c_alpha(a, sp)?);
    if rc.is_finite() {
        let pt = cfg.p_t_max;
        let h = rayleigh_tail(f.assoc, rc, |r| {
            let x = s * pt * r.powf(-a);
            Ok(r * r * (b_alpha(a, x)? + 2.0 * x / (a - 2.0) * c_alpha(a, x)?))
        })?;
        e += PI * f.eff * h;
    }
    Ok(e)
}

/// p L(T/P̄) + ∫_{r_c}^∞ L(T r^α / P_Tmax) f_R(r) dr for a log-transform `log_l`.
fn coverage_from<F>(cfg: &NetworkConfig, assoc: f64, t: f64, log_l: F) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    if t.is_infinite() {
        return Ok(0.0);
    }
    let rc = critical_distance(cfg).r_c();
    let near = if rc.is_infinite() { 1.0 } else { -(-PI * assoc * rc * rc).exp_m1() };
    let mut p = near * (-log_l(t / cfg.p_bar_t)?).exp();
    if rc.is_finite() {
        let (a, pt) = (cfg.alpha, cfg.p_t_max);
        p += rayleigh_tail(assoc, rc, |r| Ok((-log_l(t * r.powf(a) / pt)?).exp()))?;
    }
    Ok(p.clamp(0.0, 1.0))
}

/// Laplace transform of the uplink interference at a typical aggregator.
pub fn laplace_interference(cfg: &NetworkConfig, lambda_a: f64, s: f64) -> Result<LaplaceEval> {
    cfg.validate()?;
    check_positive("aggregator density", lambda_a)?;
    check_positive("Laplace argument", s)?;
    let e = intra_exponent(cfg, Field { eff: lambda_a, assoc: lambda_a }, s)?;
    Ok(LaplaceEval { s, value: (-e).exp() })
}

/// Closed-form lower bound obtained by replacing the capped-power C_α factor with 1.
pub fn laplace_interference_lower_bound(cfg: &NetworkConfig, lambda_a: f64, s: f64) -> Result<LaplaceEval> {
    cfg.validate()?;
    check_positive("aggregator density", lambda_a)?;
    check_positive("Laplace argument", s)?;
    let value = (-lower_bound_exponent(cfg, lambda_a, s)?).exp();
    Ok(LaplaceEval { s, value })
}

fn lower_bound_exponent(cfg: &NetworkConfig, lambda_a: f64, s: f64) -> Result<f64> {
    let a = cfg.alpha;
    let rc = critical_distance(cfg).r_c();
    let mut e = inner_mass(lambda_a, rc)? * cfg.p_bar_t * c_alpha(a, s * cfg.p_bar_t)?;
    if rc.is_finite() {
        let pl = PI * lambda_a;
        // (1-p) πλ E[R^{2-α} | R > r_c] = (πλ)^{α/2} Γ(2 - α/2, πλ r_c²)
        e += cfg.p_t_max * pl.powf(a / 2.0) * upper_incomplete_gamma(2.0 - a / 2.0, pl * rc * rc)?;
    }
    Ok(2.0 * s / (a - 2.0) * e)
}

/// Single-tier SIR coverage P(SIR > t).
pub fn sir_coverage_single(cfg: &NetworkConfig, lambda_a: f64, t: f64) -> Result<f64> {
    cfg.validate()?;
    check_positive("aggregator density", lambda_a)?;
    check_positive("SIR threshold", t)?;
    let f = Field { eff: lambda_a, assoc: lambda_a };
    coverage_from(cfg, lambda_a, t, |s| intra_exponent(cfg, f, s))
}

/// Coverage evaluated with the lower-bound transform.
pub fn sir_coverage_lower_bound(cfg: &NetworkConfig, lambda_a: f64, t: f64) -> Result<f64> {
    cfg.validate()?;
    check_positive("aggregator density", lambda_a)?;
    check_positive("SIR threshold", t)?;
    coverage_from(cfg, lambda_a, t, |s| lower_bound_exponent(cfg, lambda_a, s))
}

/// Open-loop limit exp(-2T C_α(T)/(α-2)), independent of density.
pub fn open_loop_coverage(alpha: f64, t: f64) -> Result<f64> {
    check_positive("SIR threshold", t)?;
    Ok((-2.0 * t * c_alpha(alpha, t)? / (alpha - 2.0)).exp())
}

/// Probability that each stage's cells are nonempty.
pub fn thinning_probabilities(plan: &StagePlan) -> Vec<f64> {
    plan.stages.iter().map(|s| thinning_probability(s.mean_na)).collect()
}

fn check_pth(plan: &StagePlan, p_th: &[f64]) -> Result<()> {
    if p_th.len() != plan.k_total {
        return Err(domain(format!("need {} thinning probabilities, got {}", plan.k_total, p_th.len())));
    }
    if let Some(p) = p_th.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(domain(format!("thinning probability outside [0, 1]: {p}")));
    }
    Ok(())
}

fn stage_field(plan: &StagePlan, p_th: &[f64], k: usize) -> Result<Field> {
    let la = plan.stage(k)?.lambda_a;
    Ok(Field { eff: p_th[k - 1] * la, assoc: la })
}

/// Intra-stage interference transform at stage `k` with thinned interferers.
pub fn laplace_intra_stage(
    cfg: &NetworkConfig,
    plan: &StagePlan,
    k: usize,
    p_th: &[f64],
    s: f64,
) -> Result<LaplaceEval> {
    check_pth(plan, p_th)?;
    check_positive("Laplace argument", s)?;
    let e = intra_exponent(cfg, stage_field(plan, p_th, k)?, s)?;
    Ok(LaplaceEval { s, value: (-e).exp() })
}

/// Interference transform from the other co-active stages in `active_set`.
pub fn laplace_inter_stage(
    cfg: &NetworkConfig,
    plan: &StagePlan,
    k: usize,
    active_set: &[usize],
    p_th: &[f64],
    s: f64,
) -> Result<LaplaceEval> {
    check_pth(plan, p_th)?;
    check_positive("Laplace argument", s)?;
    plan.stage(k)?;
    if active_set.contains(&k) {
        return Err(domain(format!("active set must exclude the receiving stage {k}")));
    }
    let mut e = 0.0;
    for &l in active_set {
        e += inter_exponent(cfg, stage_field(plan, p_th, l)?, s)?;
    }
    Ok(LaplaceEval { s, value: (-e).exp() })
}

/// Per-stage SIR coverage under a transmission mode, prepared once per plan.
#[derive(Debug, Clone)]
pub struct ModeCoverage<'a> {
    cfg: &'a NetworkConfig,
    plan: &'a StagePlan,
    mode: TransmissionMode,
    p_th: Vec<f64>,
}

impl<'a> ModeCoverage<'a> {
    pub fn new(cfg: &'a NetworkConfig, plan: &'a StagePlan, mode: TransmissionMode) -> Result<Self> {
        cfg.validate()?;
        Ok(Self { cfg, plan, mode, p_th: thinning_probabilities(plan) })
    }

    pub fn mode(&self) -> TransmissionMode {
        self.mode
    }

    pub fn thinning(&self) -> &[f64] {
        &self.p_th
    }

    /// Stages whose success enters the end-to-end product.
    pub fn stages(&self) -> Vec<usize> {
        match self.mode {
            TransmissionMode::HalfDuplexParallel => (1..=self.plan.k_total).step_by(2).collect(),
            _ => (1..=self.plan.k_total).collect(),
        }
    }

    /// Stages transmitting while stage `k` receives, excluding `k`.
    pub fn interferers_of(&self, k: usize) -> Vec<usize> {
        (1..=self.plan.k_total).filter(|&l| l != k && self.mode.coactive(k, l)).collect()
    }

    /// P(SIR_k > t); infinite `t` gives 0.
    pub fn stage_coverage(&self, k: usize, t: f64) -> Result<f64> {
        let st = self.plan.stage(k)?;
        if !(t > 0.0) {
            return Err(domain(format!("SIR threshold must be positive, got {t}")));
        }
        if self.mode == TransmissionMode::Sequential {
            let f = Field { eff: st.lambda_a, assoc: st.lambda_a };
            return coverage_from(self.cfg, st.lambda_a, t, |s| intra_exponent(self.cfg, f, s));
        }
        let own = stage_field(self.plan, &self.p_th, k)?;
        let others = self
            .interferers_of(k)
            .into_iter()
            .map(|l| stage_field(self.plan, &self.p_th, l))
            .collect::<Result<Vec<_>>>()?;
        coverage_from(self.cfg, st.lambda_a, t, |s| {
            let mut e = intra_exponent(self.cfg, own, s)?;
            for f in &others {
                e += inter_exponent(self.cfg, *f, s)?;
            }
            Ok(e)
        })
    }

    pub fn coverage(&self, t: f64) -> Result<StageCoverage> {
        let stages = self.stages();
        let per_stage = stages.iter().map(|&k| self.stage_coverage(k, t)).collect::<Result<Vec<_>>>()?;
        Ok(StageCoverage::new(stages, per_stage))
    }

    /// Half-duplex phase in which the stages of the given parity (1 = odd, 0 = even) transmit.
    pub fn half_duplex_phase(&self, parity: usize, t: f64) -> Result<StageCoverage> {
        let hd = ModeCoverage { mode: TransmissionMode::HalfDuplexParallel, ..self.clone() };
        let stages: Vec<usize> = (1..=self.plan.k_total).filter(|k| k % 2 == parity % 2).collect();
        let per_stage = stages.iter().map(|&k| hd.stage_coverage(k, t)).collect::<Result<Vec<_>>>()?;
        Ok(StageCoverage::new(stages, per_stage))
    }
}

/// Mode-level SIR coverage: per-stage values and their running products.
pub fn sir_coverage_mode(
    cfg: &NetworkConfig,
    plan: &StagePlan,
    mode: TransmissionMode,
    t: f64,
) -> Result<StageCoverage> {
    check_positive("SIR threshold", t)?;
    ModeCoverage::new(cfg, plan, mode)?.coverage(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::build_stage_plan;

    fn cfg() -> NetworkConfig {
        NetworkConfig::reference(1.0, 0.5, 0.0)
    }

    #[test]
    fn open_loop_value() {
        let p = sir_coverage_single(&cfg(), 100.0, 1.0).unwrap();
        assert!((p - (-PI / 4.0).exp()).abs() < 1e-12);
        assert!((open_loop_coverage(4.0, 1.0).unwrap() - 0.455_938_127_765_996_2).abs() < 1e-12);
    }

    #[test]
    fn laplace_small_argument() {
        let c = NetworkConfig { p_t_max: 10.0, ..cfg() };
        let l = laplace_interference(&c, 100.0, 1e-12).unwrap();
        assert!((l.value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn huge_cap_matches_open_loop() {
        let c = NetworkConfig { p_t_max: 1e9, ..cfg() };
        for &t in &[0.1, 1.0, 10.0] {
            let p = sir_coverage_single(&c, 100.0, t).unwrap();
            assert!((p - open_loop_coverage(4.0, t).unwrap()).abs() < 1e-5);
        }
    }

    #[test]
    fn thinning_values() {
        assert!((thinning_probability(9.0) - (1.0 - (3.5f64 / 12.5).powf(3.5))).abs() < 1e-15);
        assert_eq!(thinning_probability(0.0), 0.0);
        assert!(thinning_probability(1e9) > 1.0 - 1e-12);
    }

    #[test]
    fn intra_stage_reductions() {
        let c = NetworkConfig { p_t_max: 20.0, ..cfg() };
        let plan = build_stage_plan(&c, 0.1, 1).unwrap();
        let a = laplace_intra_stage(&c, &plan, 1, &[1.0], 0.3).unwrap().value;
        let b = laplace_interference(&c, plan.stages[0].lambda_a, 0.3).unwrap().value;
        assert!((a - b).abs() < 1e-14);
        assert_eq!(laplace_intra_stage(&c, &plan, 1, &[0.0], 0.3).unwrap().value, 1.0);
    }

    #[test]
    fn inter_stage_product_structure() {
        let c = cfg();
        let plan = build_stage_plan(&c, 0.1, 3).unwrap();
        let p = [1.0, 1.0, 1.0];
        assert_eq!(laplace_inter_stage(&c, &plan, 1, &[], &p, 2.0).unwrap().value, 1.0);
        let one = laplace_inter_stage(&c, &plan, 1, &[2], &p, 2.0).unwrap().value;
        let two = laplace_inter_stage(&c, &plan, 1, &[2, 3], &p, 2.0).unwrap().value;
        assert!((two - one * one).abs() < 1e-14);
        // B_4(t) + t C_4(t) = √t (atan(1/√t) + atan(√t)) = √t π/2
        let expect = (-(2f64).sqrt() * PI / 2.0).exp();
        assert!((one - expect).abs() < 1e-12);
        assert!(laplace_inter_stage(&c, &plan, 1, &[1], &p, 2.0).is_err());
    }

    #[test]
    fn sequential_open_loop_power() {
        let c = cfg();
        let plan = build_stage_plan(&c, 0.1, 3).unwrap();
        let cov = sir_coverage_mode(&c, &plan, TransmissionMode::Sequential, 1.0).unwrap();
        assert!((cov.total() - (-3.0 * PI / 4.0).exp()).abs() < 1e-12);
    }

    #[test]
    fn half_duplex_stage_sets() {
        let c = cfg();
        let plan = build_stage_plan(&c, 0.1, 3).unwrap();
        let m = ModeCoverage::new(&c, &plan, TransmissionMode::HalfDuplexParallel).unwrap();
        assert_eq!(m.stages(), vec![1, 3]);
        assert_eq!(m.interferers_of(1), vec![3]);
        assert_eq!(m.half_duplex_phase(0, 1.0).unwrap().stages, vec![2]);
    }
}
