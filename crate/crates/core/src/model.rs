//! Network configuration and the per-stage bookkeeping of a hierarchical plan.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Physical-layer and density parameters. Densities per km², distances in km,
/// powers in mW, bandwidth in Hz, payload in bits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetworkConfig {
    pub lambda: f64,
    pub lambda_bs: f64,
    pub alpha: f64,
    pub p_bar_t: f64,
    /// Maximum transmit power; `f64::INFINITY` disables truncation.
    pub p_t_max: f64,
    pub eta: f64,
    pub p_lo: f64,
    pub p_rx: f64,
    pub p_tx: f64,
    pub p_o: f64,
    pub w: f64,
    pub m_payload: f64,
    /// Noise spectral density. Carried for completeness; the model is interference limited.
    pub n0: f64,
}

impl NetworkConfig {
    /// Reference deployment: λ = 1000, λ_BS = 1, α = 4, W = 100 kHz, M = 100 bits,
    /// P_RX = 200 mW, P_TX = 100 mW, P_LO = 5 mW, no power cap. The target received
    /// power, amplifier efficiency and receiver overhead have no reference value and
    /// must be supplied.
    pub fn reference(p_bar_t: f64, eta: f64, p_o: f64) -> Self {
        Self {
            lambda: 1e3,
            lambda_bs: 1.0,
            alpha: 4.0,
            p_bar_t,
            p_t_max: f64::INFINITY,
            eta,
            p_lo: 5.0,
            p_rx: 200.0,
            p_tx: 100.0,
            p_o,
            w: 1e5,
            m_payload: 100.0,
            n0: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if !(self.lambda_bs > 0.0 && self.lambda > self.lambda_bs && self.lambda.is_finite()) {
            return bad(format!("need lambda > lambda_bs > 0, got {} and {}", self.lambda, self.lambda_bs));
        }
        if !(self.alpha > 2.0 && self.alpha.is_finite()) {
            return bad(format!("alpha must exceed 2, got {}", self.alpha));
        }
        if !(self.eta > 0.0 && self.eta <= 1.0) {
            return bad(format!("eta must lie in (0, 1], got {}", self.eta));
        }
        if !(self.p_bar_t >= 0.0 && self.p_bar_t.is_finite()) {
            return bad(format!("p_bar_t must be finite and nonnegative, got {}", self.p_bar_t));
        }
        if !(self.p_t_max >= self.p_bar_t) || self.p_t_max <= 0.0 {
            return bad(format!("p_t_max must be positive and at least p_bar_t, got {}", self.p_t_max));
        }
        for (name, v) in [("p_lo", self.p_lo), ("p_rx", self.p_rx), ("p_tx", self.p_tx), ("p_o", self.p_o)] {
            if !(v >= 0.0 && v.is_finite()) {
                return bad(format!("{name} must be finite and nonnegative, got {v}"));
            }
        }
        if !(self.w > 0.0 && self.w.is_finite()) {
            return bad(format!("bandwidth must be positive, got {}", self.w));
        }
        if !(self.m_payload > 0.0 && self.m_payload.is_finite()) {
            return bad(format!("payload must be positive, got {}", self.m_payload));
        }
        if !(self.n0 >= 0.0) {
            return bad(format!("n0 must be nonnegative, got {}", self.n0));
        }
        Ok(())
    }

    /// Sum of the constant transceiver block powers P_TX + P_RX + P_LO + P_O.
    pub fn p_c(&self) -> f64 {
        self.p_tx + self.p_rx + self.p_lo + self.p_o
    }

    /// Transmit power under truncated channel inversion at link distance `d`.
    pub fn transmit_power(&self, d: f64) -> f64 {
        (self.p_bar_t * d.powf(self.alpha)).min(self.p_t_max)
    }
}

/// Range within which full channel inversion is feasible.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalDistance(pub f64);

impl CriticalDistance {
    pub fn r_c(self) -> f64 {
        self.0
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }
}

pub fn critical_distance(cfg: &NetworkConfig) -> CriticalDistance {
    if cfg.p_t_max.is_infinite() {
        return CriticalDistance(f64::INFINITY);
    }
    if cfg.p_bar_t == 0.0 {
        return CriticalDistance(f64::INFINITY);
    }
    CriticalDistance((cfg.p_t_max / cfg.p_bar_t).powf(1.0 / cfg.alpha))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TransmissionMode {
    Sequential,
    FullDuplexParallel,
    HalfDuplexParallel,
}

impl TransmissionMode {
    pub const ALL: [TransmissionMode; 3] =
        [TransmissionMode::Sequential, TransmissionMode::FullDuplexParallel, TransmissionMode::HalfDuplexParallel];

    pub fn name(self) -> &'static str {
        match self {
            TransmissionMode::Sequential => "sequential",
            TransmissionMode::FullDuplexParallel => "full-duplex",
            TransmissionMode::HalfDuplexParallel => "half-duplex",
        }
    }

    /// Whether stage `l` transmits while stage `k` is being received (1-based).
    pub fn coactive(self, k: usize, l: usize) -> bool {
        match self {
            TransmissionMode::Sequential => k == l,
            TransmissionMode::FullDuplexParallel => true,
            TransmissionMode::HalfDuplexParallel => k % 2 == l % 2,
        }
    }
}

impl fmt::Display for TransmissionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TransmissionMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sequential" | "seq" => Ok(TransmissionMode::Sequential),
            "full-duplex" | "fd" => Ok(TransmissionMode::FullDuplexParallel),
            "half-duplex" | "hd" => Ok(TransmissionMode::HalfDuplexParallel),
            _ => Err(Error::Config(format!("unknown transmission mode '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stage {
    pub lambda_u: f64,
    pub lambda_a: f64,
    pub mean_na: f64,
    pub t_tx: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StagePlan {
    pub gamma: f64,
    pub k_total: usize,
    /// Σ_{k=1}^{K-1} γ^k.
    pub gamma_bar: f64,
    /// Effective aggregator fraction of the last stage, λ_BS / (λγ^{K-1} + λ_BS).
    pub last_stage_fraction: f64,
    pub stages: Vec<Stage>,
}

impl StagePlan {
    /// Stage `k`, 1-based.
    pub fn stage(&self, k: usize) -> Result<&Stage> {
        if k == 0 || k > self.k_total {
            return Err(Error::Domain(format!("stage {k} outside 1..={}", self.k_total)));
        }
        Ok(&self.stages[k - 1])
    }
}

pub fn build_stage_plan(cfg: &NetworkConfig, gamma: f64, k_total: usize) -> Result<StagePlan> {
    cfg.validate()?;
    if !(gamma > 0.0 && gamma < 0.5) {
        return Err(Error::Domain(format!("gamma must lie in (0, 0.5), got {gamma}")));
    }
    if k_total == 0 {
        return Err(Error::Domain("at least one stage is required".into()));
    }
    let lam = cfg.lambda;
    let last_tx = lam * gamma.powi(k_total as i32 - 1);
    if k_total > 1 && last_tx < cfg.lambda_bs {
        return Err(Error::Degenerate(format!(
            "last-stage transmitter density {last_tx} is below the BS density {} (gamma = {gamma}, K = {k_total})",
            cfg.lambda_bs
        )));
    }
    let gamma_bar: f64 = (1..k_total).map(|k| gamma.powi(k as i32)).sum();
    let mut stages = Vec::with_capacity(k_total);
    let mut t_tx = 1.0;
    for k in 1..=k_total {
        let lambda_u = if k == 1 { lam * (1.0 - gamma_bar) } else { lam * gamma.powi(k as i32 - 1) };
        let lambda_a = if k < k_total { lam * gamma.powi(k as i32) } else { cfg.lambda_bs };
        let mean_na = lambda_u / lambda_a;
        stages.push(Stage { lambda_u, lambda_a, mean_na, t_tx });
        t_tx *= mean_na;
    }
    let last_stage_fraction = cfg.lambda_bs / (last_tx + cfg.lambda_bs);
    Ok(StagePlan { gamma, k_total, gamma_bar, last_stage_fraction, stages })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> NetworkConfig {
        NetworkConfig::reference(1.0, 0.5, 0.0)
    }

    #[test]
    fn single_stage_is_direct() {
        let p = build_stage_plan(&cfg(), 0.1, 1).unwrap();
        let s = p.stage(1).unwrap();
        assert_eq!((s.lambda_u, s.lambda_a, s.mean_na, s.t_tx), (1000.0, 1.0, 1000.0, 1.0));
        assert_eq!(p.gamma_bar, 0.0);
    }

    #[test]
    fn three_stage_bookkeeping() {
        let p = build_stage_plan(&cfg(), 0.1, 3).unwrap();
        let lu: Vec<f64> = p.stages.iter().map(|s| s.lambda_u).collect();
        let la: Vec<f64> = p.stages.iter().map(|s| s.lambda_a).collect();
        let t: Vec<f64> = p.stages.iter().map(|s| s.t_tx).collect();
        let close = |a: &[f64], b: &[f64]| a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-9 * y.abs().max(1.0));
        assert!(close(&lu, &[890.0, 100.0, 10.0]));
        assert!(close(&la, &[100.0, 10.0, 1.0]));
        assert!(close(&t, &[1.0, 8.9, 89.0]));
        assert!((p.last_stage_fraction - 1.0 / 11.0).abs() < 1e-12);
    }

    #[test]
    fn fig_one_densities() {
        let c = NetworkConfig { lambda_bs: 64.0, ..cfg() };
        let p = build_stage_plan(&c, 0.4, 3).unwrap();
        let la: Vec<f64> = p.stages.iter().map(|s| s.lambda_a).collect();
        for (x, y) in la.iter().zip([400.0, 160.0, 64.0]) {
            assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn rejects_bad_plans() {
        assert!(matches!(build_stage_plan(&cfg(), 0.5, 2), Err(Error::Domain(_))));
        assert!(matches!(build_stage_plan(&cfg(), 0.0, 2), Err(Error::Domain(_))));
        assert!(matches!(build_stage_plan(&cfg(), 0.1, 0), Err(Error::Domain(_))));
        assert!(matches!(build_stage_plan(&cfg(), 0.1, 5), Err(Error::Degenerate(_))));
    }

    #[test]
    fn critical_distance_cases() {
        let mut c = cfg();
        c.p_t_max = 1.0;
        assert!((critical_distance(&c).r_c() - 1.0).abs() < 1e-15);
        c.p_t_max = 16.0;
        assert!((critical_distance(&c).r_c() - 2.0).abs() < 1e-15);
        c.p_t_max = f64::INFINITY;
        assert!(critical_distance(&c).is_infinite());
    }

    #[test]
    fn config_validation() {
        assert!(cfg().validate().is_ok());
        assert!(NetworkConfig { eta: 0.0, ..cfg() }.validate().is_err());
        assert!(NetworkConfig { alpha: 2.0, ..cfg() }.validate().is_err());
        assert!(NetworkConfig { lambda_bs: 2000.0, ..cfg() }.validate().is_err());
        assert!(NetworkConfig { p_t_max: 0.5, ..cfg() }.validate().is_err());
    }

    #[test]
    fn mode_parsing() {
        for m in TransmissionMode::ALL {
            assert_eq!(m.name().parse::<TransmissionMode>().unwrap(), m);
        }
        assert!("x".parse::<TransmissionMode>().is_err());
    }
}
