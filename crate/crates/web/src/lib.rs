//! Browser bindings for three curves: SIR coverage against the threshold,
//! energy density against the aggregator fraction, and the rate CDF.
//!
//! Every curve comes back as a flat `[x0, y0, x1, y1, ...]` array. The plain
//! `*_curve` functions hold the logic so they can be tested natively.

use m2m_agg::coverage::ModeCoverage;
use m2m_agg::energy::{optimize_gamma, total_energy_density, CoverageVector};
use m2m_agg::model::{build_stage_plan, NetworkConfig, TransmissionMode};
use m2m_agg::rate::RateModel;
use m2m_agg::{Error, Result};
use wasm_bindgen::prelude::*;

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let n = n.max(2);
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
}

fn interleave(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    xs.iter().zip(ys).flat_map(|(&x, &y)| [x, y]).collect()
}

/// Reference network with the user-set transmit target, efficiency, overhead
/// and cap; a cap ratio of zero or below means no cap.
pub fn network(p_bar_t: f64, eta: f64, p_o: f64, cap_ratio: f64) -> Result<NetworkConfig> {
    let p_t_max = if cap_ratio > 0.0 { cap_ratio * p_bar_t } else { f64::INFINITY };
    let cfg = NetworkConfig { p_t_max, ..NetworkConfig::reference(p_bar_t, eta, p_o) };
    cfg.validate()?;
    Ok(cfg)
}

/// End-to-end SIR coverage for thresholds log-spaced over `[t_lo, t_hi]`.
pub fn coverage_curve(
    cfg: &NetworkConfig,
    mode: TransmissionMode,
    k: usize,
    gamma: f64,
    t_lo: f64,
    t_hi: f64,
    n: usize,
) -> Result<Vec<f64>> {
    let plan = build_stage_plan(cfg, gamma, k)?;
    let mc = ModeCoverage::new(cfg, &plan, mode)?;
    let ts = log_grid(t_lo, t_hi, n);
    let ys = ts.iter().map(|&t| mc.coverage(t).map(|c| c.total())).collect::<Result<Vec<_>>>()?;
    Ok(interleave(&ts, &ys))
}

/// Energy density for γ log-spaced over `[g_lo, g_hi]`, assuming every hop
/// succeeds. Infeasible γ are dropped.
pub fn energy_curve(cfg: &NetworkConfig, k: usize, g_lo: f64, g_hi: f64, n: usize) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(2 * n);
    for g in log_grid(g_lo, g_hi, n) {
        match build_stage_plan(cfg, g, k) {
            Ok(plan) => {
                out.push(g);
                out.push(total_energy_density(cfg, &plan, &CoverageVector::ones(k))?.total);
            }
            Err(Error::Degenerate(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// `[γ_opt, E(γ_opt)]`, or `[NaN, E]` of direct transmission for K = 1.
pub fn energy_optimum(cfg: &NetworkConfig, k: usize) -> Result<Vec<f64>> {
    if k == 1 {
        let plan = build_stage_plan(cfg, 0.25, 1)?;
        return Ok(vec![f64::NAN, total_energy_density(cfg, &plan, &CoverageVector::ones(1))?.total]);
    }
    let o = optimize_gamma(cfg, k, |p| Ok(CoverageVector::ones(p.k_total)))?;
    Ok(vec![o.gamma_opt, o.energy.total])
}

/// CDF of the end-to-end rate, P(rate ≤ ρ), for ρ log-spaced over `[r_lo, r_hi]` bit/s.
pub fn rate_cdf_curve(
    cfg: &NetworkConfig,
    mode: TransmissionMode,
    k: usize,
    gamma: f64,
    r_lo: f64,
    r_hi: f64,
    n: usize,
) -> Result<Vec<f64>> {
    let plan = build_stage_plan(cfg, gamma, k)?;
    let model = RateModel::new(cfg, &plan, mode, None)?;
    let rs = log_grid(r_lo, r_hi, n);
    let ys = rs.iter().map(|&r| model.coverage(r).map(|c| 1.0 - c.probability)).collect::<Result<Vec<_>>>()?;
    Ok(interleave(&rs, &ys))
}

fn js(e: Error) -> JsError {
    JsError::new(&e.to_string())
}

/// A fixed network configuration the page queries for curves.
#[wasm_bindgen]
pub struct Demo {
    cfg: NetworkConfig,
}

#[wasm_bindgen]
impl Demo {
    #[wasm_bindgen(constructor)]
    pub fn new(p_bar_t: f64, eta: f64, p_o: f64, p_lo: f64, cap_ratio: f64) -> std::result::Result<Demo, JsError> {
        let mut cfg = network(p_bar_t, eta, p_o, cap_ratio).map_err(js)?;
        cfg.p_lo = p_lo;
        cfg.validate().map_err(js)?;
        Ok(Demo { cfg })
    }

    /// `mode` is one of `seq`, `fd`, `hd`.
    pub fn coverage(
        &self,
        mode: &str,
        k: usize,
        gamma: f64,
        t_lo: f64,
        t_hi: f64,
        n: usize,
    ) -> std::result::Result<Vec<f64>, JsError> {
        let mode = mode.parse().map_err(js)?;
        coverage_curve(&self.cfg, mode, k, gamma, t_lo, t_hi, n).map_err(js)
    }

    pub fn energy(&self, k: usize, g_lo: f64, g_hi: f64, n: usize) -> std::result::Result<Vec<f64>, JsError> {
        energy_curve(&self.cfg, k, g_lo, g_hi, n).map_err(js)
    }

    #[wasm_bindgen(js_name = energyOptimum)]
    pub fn energy_optimum(&self, k: usize) -> std::result::Result<Vec<f64>, JsError> {
        energy_optimum(&self.cfg, k).map_err(js)
    }

    #[wasm_bindgen(js_name = rateCdf)]
    pub fn rate_cdf(
        &self,
        mode: &str,
        k: usize,
        gamma: f64,
        r_lo: f64,
        r_hi: f64,
        n: usize,
    ) -> std::result::Result<Vec<f64>, JsError> {
        let mode = mode.parse().map_err(js)?;
        rate_cdf_curve(&self.cfg, mode, k, gamma, r_lo, r_hi, n).map_err(js)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> NetworkConfig {
        network(1.0, 0.5, 0.0, 0.0).unwrap()
    }

    #[test]
    fn coverage_falls_with_threshold() {
        let v = coverage_curve(&cfg(), TransmissionMode::Sequential, 2, 0.1, 0.1, 10.0, 12).unwrap();
        assert_eq!(v.len(), 24);
        assert!((v[0] - 0.1).abs() < 1e-12 && (v[22] - 10.0).abs() < 1e-9);
        assert!(v.chunks(2).map(|p| p[1]).collect::<Vec<_>>().windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn optimum_is_below_sweep() {
        let c = cfg();
        let curve = energy_curve(&c, 3, 0.001, 0.499, 40).unwrap();
        let best = curve.chunks(2).map(|p| p[1]).fold(f64::INFINITY, f64::min);
        let opt = energy_optimum(&c, 3).unwrap();
        assert!(opt[1] <= best * (1.0 + 1e-9));
        assert!(energy_optimum(&c, 1).unwrap()[0].is_nan());
    }

    #[test]
    fn rate_cdf_is_a_cdf() {
        let v = rate_cdf_curve(&cfg(), TransmissionMode::FullDuplexParallel, 2, 0.1, 1.0, 1e6, 20).unwrap();
        let ys: Vec<f64> = v.chunks(2).map(|p| p[1]).collect();
        assert!(ys.iter().all(|&y| (0.0..=1.0).contains(&y)));
        assert!(ys.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn cap_ratio_sets_cap() {
        assert_eq!(network(2.0, 0.5, 0.0, 3.0).unwrap().p_t_max, 6.0);
        assert!(network(1.0, 0.5, 0.0, 0.5).is_err());
    }
}
