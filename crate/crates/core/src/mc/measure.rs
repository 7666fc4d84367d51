//! Estimators over simulated deployments.
//!
//! Cell statistics use only receivers inside the guarded inner window of
//! their stage. Coverage proportions treat every interior link as one
//! Bernoulli sample; links in one deployment are correlated, so the reported
//! half-widths are optimistic.

use super::deployment::{sample_deployment, Deployment};
use super::links::{simulate_links, LinkOptions, LinkSample};
use super::{run_deployments, McEstimate, McSettings, SampleStats};
use crate::error::{Error, Result};
use crate::model::{build_stage_plan, NetworkConfig, StagePlan, TransmissionMode};
use crate::rate::LoadPmf;

/// Sum over the members of each interior stage-`k` cell of P_T(d)/η.
pub fn pa_power_sample(dep: &Deployment, cfg: &NetworkConfig, k: usize) -> SampleStats {
    let s = dep.stage(k);
    let mut stats = SampleStats::default();
    for (c, m) in s.members.iter().enumerate() {
        if !s.interior[c] {
            continue;
        }
        let total: f64 = m
            .iter()
            .map(|&j| cfg.transmit_power(dep.distance(s.transmitters[j as usize], s.receivers[c])) / cfg.eta)
            .sum();
        stats.push(total);
    }
    stats
}

/// Mean amplifier power per stage-`k` cell over independent deployments.
pub fn measure_pa_power(cfg: &NetworkConfig, plan: &StagePlan, k: usize, settings: &McSettings) -> Result<McEstimate> {
    plan.stage(k)?;
    let parts = run_deployments(settings, |seed| {
        let dep = sample_deployment(cfg, plan, settings.half_width, seed)?;
        Ok(pa_power_sample(&dep, cfg, k))
    })?;
    let mut all = SampleStats::default();
    parts.iter().for_each(|p| all.merge(p));
    all.estimate()
}

/// Per-cell load counts of one stage.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LoadSample {
    pub first: SampleStats,
    pub second: SampleStats,
    pub idle: SampleStats,
    pub histogram: Vec<u64>,
}

impl LoadSample {
    pub fn merge(&mut self, other: &LoadSample) {
        self.first.merge(&other.first);
        self.second.merge(&other.second);
        self.idle.merge(&other.idle);
        if self.histogram.len() < other.histogram.len() {
            self.histogram.resize(other.histogram.len(), 0);
        }
        for (a, b) in self.histogram.iter_mut().zip(&other.histogram) {
            *a += b;
        }
    }
}

pub fn load_sample(dep: &Deployment, k: usize) -> LoadSample {
    let s = dep.stage(k);
    let mut out = LoadSample::default();
    for (c, m) in s.members.iter().enumerate() {
        if !s.interior[c] {
            continue;
        }
        let n = m.len();
        out.first.push(n as f64);
        out.second.push((n * n) as f64);
        out.idle.push(if n == 0 { 1.0 } else { 0.0 });
        if out.histogram.len() <= n {
            out.histogram.resize(n + 1, 0);
        }
        out.histogram[n] += 1;
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoadMoments {
    pub mean: McEstimate,
    pub second: McEstimate,
    pub idle: McEstimate,
    pub histogram: Vec<u64>,
}

impl LoadMoments {
    pub fn from_sample(s: &LoadSample) -> Result<Self> {
        Ok(Self {
            mean: s.first.estimate()?,
            second: s.second.estimate()?,
            idle: s.idle.estimate()?,
            histogram: s.histogram.clone(),
        })
    }

    /// Σ (p̂_l - p_l)² / p_l over the model support, with the empirical mass
    /// beyond it pooled into the last bin.
    pub fn chi_square_distance(&self, pmf: &LoadPmf) -> f64 {
        let n: u64 = self.histogram.iter().sum();
        let last = pmf.probs.len() - 1;
        let mut emp = vec![0.0; pmf.probs.len()];
        for (l, &h) in self.histogram.iter().enumerate() {
            emp[l.min(last)] += h as f64 / n as f64;
        }
        let mut model = pmf.probs.clone();
        model[last] += pmf.tail_mass;
        emp.iter().zip(&model).filter(|(_, &p)| p > 0.0).map(|(e, p)| (e - p).powi(2) / p).sum()
    }
}

pub fn measure_load_moments(
    cfg: &NetworkConfig,
    plan: &StagePlan,
    k: usize,
    settings: &McSettings,
) -> Result<LoadMoments> {
    plan.stage(k)?;
    let parts = run_deployments(settings, |seed| Ok(load_sample(&sample_deployment(cfg, plan, settings.half_width, seed)?, k)))?;
    let mut all = LoadSample::default();
    parts.iter().for_each(|p| all.merge(p));
    LoadMoments::from_sample(&all)
}

/// Bivariate moments for a Pearson correlation.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PairStats {
    pub n: u64,
    pub sx: f64,
    pub sy: f64,
    pub sxx: f64,
    pub syy: f64,
    pub sxy: f64,
}

impl PairStats {
    pub fn push(&mut self, x: f64, y: f64) {
        self.n += 1;
        self.sx += x;
        self.sy += y;
        self.sxx += x * x;
        self.syy += y * y;
        self.sxy += x * y;
    }

    pub fn merge(&mut self, o: &PairStats) {
        self.n += o.n;
        self.sx += o.sx;
        self.sy += o.sy;
        self.sxx += o.sxx;
        self.syy += o.syy;
        self.sxy += o.sxy;
    }

    pub fn pearson(&self) -> f64 {
        let n = self.n as f64;
        let cov = self.sxy - self.sx * self.sy / n;
        let vx = self.sxx - self.sx * self.sx / n;
        let vy = self.syy - self.sy * self.sy / n;
        cov / (vx * vy).sqrt()
    }

    /// Fisher-z 95% interval.
    pub fn interval_95(&self) -> (f64, f64) {
        let z = self.pearson().clamp(-1.0 + 1e-15, 1.0 - 1e-15).atanh();
        let h = 1.96 / ((self.n as f64 - 3.0).max(1.0)).sqrt();
        ((z - h).tanh(), (z + h).tanh())
    }
}

/// Pairs (N_a(k) of each member, N_a(k+1) of its interior stage-(k+1) receiver).
pub fn correlation_sample(dep: &Deployment, k: usize) -> PairStats {
    let (lower, upper) = (dep.stage(k), dep.stage(k + 1));
    let mut stats = PairStats::default();
    for (c, m) in upper.members.iter().enumerate() {
        if !upper.interior[c] {
            continue;
        }
        let y = m.len() as f64;
        for &j in m {
            stats.push(lower.load(j as usize) as f64, y);
        }
    }
    stats
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationRow {
    pub gamma: f64,
    /// Lower stage of the pair (k, k+1).
    pub k: usize,
    /// NaN when fewer than the minimum number of pairs were collected.
    pub rho: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub n_pairs: u64,
}

/// Empirical inter-stage load correlation for each γ and each adjacent stage pair.
pub fn measure_stage_correlation(
    cfg: &NetworkConfig,
    gammas: &[f64],
    k_total: usize,
    settings: &McSettings,
) -> Result<Vec<CorrelationRow>> {
    if k_total < 2 {
        return Err(Error::Domain("correlation needs at least two stages".into()));
    }
    let mut rows = Vec::new();
    for &gamma in gammas {
        let plan = build_stage_plan(cfg, gamma, k_total)?;
        let parts = run_deployments(settings, |seed| {
            let dep = sample_deployment(cfg, &plan, settings.half_width, seed)?;
            Ok((1..k_total).map(|k| correlation_sample(&dep, k)).collect::<Vec<_>>())
        })?;
        for k in 1..k_total {
            let mut s = PairStats::default();
            parts.iter().for_each(|p| s.merge(&p[k - 1]));
            let (rho, ci_low, ci_high) = if s.n >= super::MIN_SAMPLES {
                let (lo, hi) = s.interval_95();
                (s.pearson(), lo, hi)
            } else {
                (f64::NAN, f64::NAN, f64::NAN)
            };
            rows.push(CorrelationRow { gamma, k, rho, ci_low, ci_high, n_pairs: s.n });
        }
    }
    Ok(rows)
}

/// Success counts at a list of thresholds.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CoverageCounts {
    pub n: u64,
    pub hits: Vec<u64>,
}

impl CoverageCounts {
    fn new(len: usize) -> Self {
        Self { n: 0, hits: vec![0; len] }
    }

    fn push(&mut self, value: f64, thresholds: &[f64]) {
        self.n += 1;
        for (h, &t) in self.hits.iter_mut().zip(thresholds) {
            if value > t {
                *h += 1;
            }
        }
    }

    pub fn merge(&mut self, o: &CoverageCounts) {
        self.n += o.n;
        for (a, b) in self.hits.iter_mut().zip(&o.hits) {
            *a += b;
        }
    }

    pub fn estimates(&self) -> Result<Vec<McEstimate>> {
        self.hits
            .iter()
            .map(|&h| SampleStats { n: self.n, sum: h as f64, sum_sq: h as f64 }.estimate())
            .collect()
    }
}

// Stage receivers visited by the stage-1 transmitter `tx`, as (stage-k transmitter, receiver) pairs.
fn path_of(dep: &Deployment, tx: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
    let mut cur = tx;
    dep.stages.iter().map(move |s| {
        let r = s.assoc[cur] as usize;
        let step = (cur, r);
        cur = r;
        step
    })
}

fn rate_share(mode: TransmissionMode, k_total: usize) -> f64 {
    match mode {
        TransmissionMode::Sequential => k_total as f64,
        TransmissionMode::FullDuplexParallel => 1.0,
        TransmissionMode::HalfDuplexParallel => 2.0,
    }
}

/// End-to-end rate and minimum SIR of every stage-1 transmitter whose whole
/// path is measured and ends at interior receivers.
pub fn path_metrics(dep: &Deployment, links: &LinkSample, cfg: &NetworkConfig, mode: TransmissionMode) -> Vec<(f64, f64)> {
    let share = rate_share(mode, dep.k_total());
    let mut out = Vec::new();
    'devices: for tx in 0..dep.stage(1).transmitters.len() {
        let mut rate = f64::INFINITY;
        let mut sir_min = f64::INFINITY;
        for (k, (t, r)) in path_of(dep, tx).enumerate() {
            let s = dep.stage(k + 1);
            if !s.interior[r] {
                continue 'devices;
            }
            let Some(sir) = links.sir(k + 1, t, mode) else { continue 'devices };
            rate = rate.min(cfg.w / s.load(r) as f64 * sir.log2_1p());
            sir_min = sir_min.min(sir);
        }
        out.push((rate / share, sir_min));
    }
    out
}

trait Log2OnePlus {
    fn log2_1p(self) -> f64;
}

impl Log2OnePlus for f64 {
    fn log2_1p(self) -> f64 {
        self.ln_1p() / std::f64::consts::LN_2
    }
}

/// Which links count as delivered when weighting downstream energy.
#[derive(Debug, Clone, Copy)]
pub enum Delivery<'a> {
    /// Every hop succeeds.
    All,
    /// A hop succeeds when its SIR under `mode` exceeds `t`.
    Sir { links: &'a LinkSample, mode: TransmissionMode, t: f64 },
}

/// Energy density of each stage in one deployment. Each transmitter carries
/// the fraction of its payload that arrived; stage-1 devices carry 1 and an
/// empty aggregator carries its own payload.
pub fn energy_sample(dep: &Deployment, cfg: &NetworkConfig, plan: &StagePlan, delivery: Delivery<'_>) -> Result<Vec<f64>> {
    let mut weights = vec![1.0; dep.stage(1).transmitters.len()];
    let mut out = Vec::with_capacity(dep.k_total());
    for k in 1..=dep.k_total() {
        let s = dep.stage(k);
        let t_tx = plan.stage(k)?.t_tx;
        let area = s.interior_area(dep.region_half_width);
        if area == 0.0 {
            return Err(Error::Degenerate(format!("stage-{k} guard {:.3} km leaves no inner window", s.guard)));
        }
        let mut total = 0.0;
        let mut next = vec![1.0; s.receivers.len()];
        for (c, m) in s.members.iter().enumerate() {
            let (mut delivered, mut measured, mut carried) = (0.0, 0usize, 0.0);
            let mut cell = 0.0;
            for &j in m {
                let j = j as usize;
                let w = weights[j];
                carried += w;
                let d = dep.distance(s.transmitters[j], s.receivers[c]);
                cell += w * (cfg.p_lo + cfg.p_o + cfg.p_rx + cfg.p_tx + cfg.transmit_power(d) / cfg.eta);
                match delivery {
                    Delivery::All => {
                        delivered += w;
                        measured += 1;
                    }
                    Delivery::Sir { links, mode, t } => {
                        if let Some(sir) = links.sir(k, j, mode) {
                            measured += 1;
                            if sir > t {
                                delivered += w;
                            }
                        }
                    }
                }
            }
            cell += carried * m.len() as f64 * cfg.p_lo;
            if s.interior[c] {
                total += t_tx * cell;
            }
            if !m.is_empty() {
                next[c] = if measured > 0 { delivered / measured as f64 } else { carried / m.len() as f64 };
            }
        }
        out.push(total / area);
        weights = next;
    }
    Ok(out)
}

/// One multi-mode experiment: shared deployments and fading draws, read under each mode.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeExperiment {
    pub modes: Vec<TransmissionMode>,
    pub sir_thresholds: Vec<f64>,
    pub rate_thresholds: Vec<f64>,
    /// SIR above which a hop counts as delivered for the energy estimate.
    pub energy_sir: f64,
    pub links: LinkOptions,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModeCounts {
    pub mode: TransmissionMode,
    /// Per stage, links whose SIR exceeds each threshold.
    pub stage_sir: Vec<CoverageCounts>,
    /// Devices whose every hop exceeds each SIR threshold.
    pub path_sir: CoverageCounts,
    pub path_rate: CoverageCounts,
    /// Per-deployment energy density of each stage.
    pub stage_energy: Vec<SampleStats>,
    pub total_energy: SampleStats,
}

impl ModeCounts {
    fn new(mode: TransmissionMode, k_total: usize, n_sir: usize, n_rate: usize) -> Self {
        Self {
            mode,
            stage_sir: vec![CoverageCounts::new(n_sir); k_total],
            path_sir: CoverageCounts::new(n_sir),
            path_rate: CoverageCounts::new(n_rate),
            stage_energy: vec![SampleStats::default(); k_total],
            total_energy: SampleStats::default(),
        }
    }

    fn merge(&mut self, o: &ModeCounts) {
        for (a, b) in self.stage_sir.iter_mut().zip(&o.stage_sir) {
            a.merge(b);
        }
        self.path_sir.merge(&o.path_sir);
        self.path_rate.merge(&o.path_rate);
        for (a, b) in self.stage_energy.iter_mut().zip(&o.stage_energy) {
            a.merge(b);
        }
        self.total_energy.merge(&o.total_energy);
    }
}

fn mode_counts(
    dep: &Deployment,
    links: &LinkSample,
    cfg: &NetworkConfig,
    plan: &StagePlan,
    exp: &ModeExperiment,
    mode: TransmissionMode,
) -> Result<ModeCounts> {
    let k_total = dep.k_total();
    let mut out = ModeCounts::new(mode, k_total, exp.sir_thresholds.len(), exp.rate_thresholds.len());
    for k in 1..=k_total {
        let s = dep.stage(k);
        for (j, &r) in s.assoc.iter().enumerate() {
            if !s.interior[r as usize] {
                continue;
            }
            if let Some(sir) = links.sir(k, j, mode) {
                out.stage_sir[k - 1].push(sir, &exp.sir_thresholds);
            }
        }
    }
    for (rate, sir) in path_metrics(dep, links, cfg, mode) {
        out.path_rate.push(rate, &exp.rate_thresholds);
        out.path_sir.push(sir, &exp.sir_thresholds);
    }
    let energy = energy_sample(dep, cfg, plan, Delivery::Sir { links, mode, t: exp.energy_sir })?;
    for (acc, &e) in out.stage_energy.iter_mut().zip(&energy) {
        acc.push(e);
    }
    out.total_energy.push(energy.iter().sum());
    Ok(out)
}

/// Estimates for one mode.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeReport {
    pub mode: TransmissionMode,
    pub stage_sir: Vec<Vec<McEstimate>>,
    pub path_sir: Vec<McEstimate>,
    pub path_rate: Vec<McEstimate>,
    /// Energy densities are one sample per deployment; `None` below
    /// [`super::MIN_SAMPLES`] deployments.
    pub stage_energy: Option<Vec<McEstimate>>,
    pub total_energy: Option<McEstimate>,
}

impl ModeReport {
    fn from_counts(c: &ModeCounts) -> Result<Self> {
        Ok(Self {
            mode: c.mode,
            stage_sir: c.stage_sir.iter().map(CoverageCounts::estimates).collect::<Result<_>>()?,
            path_sir: c.path_sir.estimates()?,
            path_rate: c.path_rate.estimates()?,
            stage_energy: c.stage_energy.iter().map(SampleStats::estimate).collect::<Result<_>>().ok(),
            total_energy: c.total_energy.estimate().ok(),
        })
    }
}

/// Runs the experiment over `settings.n_deployments` deployments.
pub fn run_mode_experiment(
    cfg: &NetworkConfig,
    plan: &StagePlan,
    settings: &McSettings,
    exp: &ModeExperiment,
) -> Result<Vec<ModeReport>> {
    let parts = run_deployments(settings, |seed| {
        let dep = sample_deployment(cfg, plan, settings.half_width, seed)?;
        let links = simulate_links(&dep, cfg, exp.links);
        exp.modes.iter().map(|&m| mode_counts(&dep, &links, cfg, plan, exp, m)).collect::<Result<Vec<_>>>()
    })?;
    let mut totals: Vec<ModeCounts> = exp
        .modes
        .iter()
        .map(|&m| ModeCounts::new(m, plan.k_total, exp.sir_thresholds.len(), exp.rate_thresholds.len()))
        .collect();
    for part in &parts {
        for (t, p) in totals.iter_mut().zip(part) {
            t.merge(p);
        }
    }
    totals.iter().map(ModeReport::from_counts).collect()
}

/// Empirical SIR and rate coverage for one mode.
pub fn measure_sir_rate_coverage(
    cfg: &NetworkConfig,
    plan: &StagePlan,
    mode: TransmissionMode,
    sir_thresholds: &[f64],
    rate_thresholds: &[f64],
    settings: &McSettings,
    links: LinkOptions,
) -> Result<ModeReport> {
    let exp = ModeExperiment {
        modes: vec![mode],
        sir_thresholds: sir_thresholds.to_vec(),
        rate_thresholds: rate_thresholds.to_vec(),
        energy_sir: 1.0,
        links,
    };
    Ok(run_mode_experiment(cfg, plan, settings, &exp)?.remove(0))
}

/// Empirical energy density of every stage when no hop fails.
pub fn measure_energy_upper(cfg: &NetworkConfig, plan: &StagePlan, settings: &McSettings) -> Result<(Vec<McEstimate>, McEstimate)> {
    let parts = run_deployments(settings, |seed| {
        let dep = sample_deployment(cfg, plan, settings.half_width, seed)?;
        energy_sample(&dep, cfg, plan, Delivery::All)
    })?;
    let mut stages = vec![SampleStats::default(); plan.k_total];
    let mut total = SampleStats::default();
    for p in &parts {
        for (s, &e) in stages.iter_mut().zip(p) {
            s.push(e);
        }
        total.push(p.iter().sum());
    }
    Ok((stages.iter().map(SampleStats::estimate).collect::<Result<_>>()?, total.estimate()?))
}

/// Empirical energy density with deliveries decided by SIR above `t` under `mode`.
pub fn measure_energy_density(
    cfg: &NetworkConfig,
    plan: &StagePlan,
    mode: TransmissionMode,
    t: f64,
    settings: &McSettings,
    links: LinkOptions,
) -> Result<ModeReport> {
    let exp = ModeExperiment { modes: vec![mode], sir_thresholds: vec![t], rate_thresholds: vec![], energy_sir: t, links };
    Ok(run_mode_experiment(cfg, plan, settings, &exp)?.remove(0))
}

/// Mean of exp(-s I) over interior stage-`k` links, with I the same-stage interference.
pub fn intra_laplace_sample(dep: &Deployment, links: &LinkSample, k: usize, s_grid: &[f64]) -> Vec<SampleStats> {
    let st = dep.stage(k);
    let mut out = vec![SampleStats::default(); s_grid.len()];
    for (j, &r) in st.assoc.iter().enumerate() {
        if !st.interior[r as usize] || !links.stages[k - 1].measured[j] {
            continue;
        }
        let i = links.interference(k, j, k);
        for (acc, &s) in out.iter_mut().zip(s_grid) {
            acc.push((-s * i).exp());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::energy::{stage_cost, total_energy_density, CoverageVector};

    fn cfg() -> NetworkConfig {
        NetworkConfig { lambda: 400.0, lambda_bs: 4.0, ..NetworkConfig::reference(1.0, 0.5, 0.0) }
    }

    #[test]
    fn zero_target_power_draws_nothing() {
        let c = NetworkConfig { p_bar_t: 0.0, ..cfg() };
        let plan = build_stage_plan(&c, 0.1, 2).unwrap();
        let dep = sample_deployment(&c, &plan, 1.0, 1).unwrap();
        let s = pa_power_sample(&dep, &c, 1);
        assert!(s.n > 0);
        assert_eq!(s.sum, 0.0);
    }

    #[test]
    fn power_cap_bounds_cell_power() {
        let c = NetworkConfig { p_bar_t: 1e3, p_t_max: 1e3, ..cfg() };
        let plan = build_stage_plan(&c, 0.1, 2).unwrap();
        let dep = sample_deployment(&c, &plan, 1.0, 2).unwrap();
        let s = dep.stage(1);
        let per_cell = pa_power_sample(&dep, &c, 1);
        let max_load = s.members.iter().map(Vec::len).max().unwrap() as f64;
        assert!(per_cell.sum / per_cell.n as f64 <= max_load * c.p_t_max / c.eta);
    }

    #[test]
    fn all_delivered_cell_energy_matches_cost_terms() {
        // With every hop delivered, a cell spends Σ(P_C + P_T/η) + N² P_LO.
        let c = cfg();
        let plan = build_stage_plan(&c, 0.1, 2).unwrap();
        let dep = sample_deployment(&c, &plan, 1.5, 3).unwrap();
        let e = energy_sample(&dep, &c, &plan, Delivery::All).unwrap();
        let s = dep.stage(1);
        let mut want = 0.0;
        for (cidx, m) in s.members.iter().enumerate() {
            if !s.interior[cidx] {
                continue;
            }
            let n = m.len() as f64;
            let pa: f64 = m
                .iter()
                .map(|&j| c.transmit_power(dep.distance(s.transmitters[j as usize], s.receivers[cidx])) / c.eta)
                .sum();
            want += n * c.p_c() + pa + n * n * c.p_lo;
        }
        want /= s.interior_area(1.5);
        assert!((e[0] - want).abs() < 1e-9 * want);
        // Same order of magnitude as the closed form.
        let closed = stage_cost(&c, &plan, 1).unwrap();
        assert!((e[0] / closed - 1.0).abs() < 0.5);
        let total = total_energy_density(&c, &plan, &CoverageVector::ones(2)).unwrap().total;
        assert!(total > 0.0);
    }

    #[test]
    fn pairs_follow_membership() {
        let c = cfg();
        let plan = build_stage_plan(&c, 0.2, 3).unwrap();
        let dep = sample_deployment(&c, &plan, 1.5, 4).unwrap();
        let p = correlation_sample(&dep, 1);
        let upper = dep.stage(2);
        let expect: usize =
            upper.members.iter().enumerate().filter(|(ci, _)| upper.interior[*ci]).map(|(_, m)| m.len()).sum();
        assert_eq!(p.n as usize, expect);
    }

    #[test]
    fn perfect_correlation() {
        let mut p = PairStats::default();
        (0..50).for_each(|i| p.push(i as f64, 2.0 * i as f64 + 1.0));
        assert!((p.pearson() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn counts_threshold_strictly() {
        let mut c = CoverageCounts::new(3);
        c.push(1.0, &[0.5, 1.0, 2.0]);
        assert_eq!(c.hits, vec![1, 0, 0]);
    }
}
