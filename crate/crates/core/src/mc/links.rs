//! TDMA link simulation with truncated channel inversion and Rayleigh fading.
//!
//! In slot t every nonempty cell activates its member at position t mod N_c,
//! so each transmitter is received in the slot equal to its TDMA position.
//! Interference at a receiver is kept separately per transmitting stage;
//! every mode then reads the same draws and sums only its coactive stages.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;

use super::deployment::Deployment;
use super::splitmix64;
use crate::model::{NetworkConfig, TransmissionMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LinkOptions {
    /// Unit-mean exponential power fading; off gives unit gains.
    pub fading: bool,
    /// Only TDMA positions below this are measured.
    pub max_slots: Option<usize>,
}

impl Default for LinkOptions {
    fn default() -> Self {
        Self { fading: true, max_slots: None }
    }
}

/// Per-transmitter received signal and interference of one stage.
#[derive(Debug, Clone, PartialEq)]
pub struct StageLinks {
    pub measured: Vec<bool>,
    pub signal: Vec<f64>,
    /// Row-major transmitters × stages.
    pub interference: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinkSample {
    pub k_total: usize,
    pub stages: Vec<StageLinks>,
}

impl LinkSample {
    /// Interference from stage `l` at the receiver of stage-`k` transmitter `tx`.
    pub fn interference(&self, k: usize, tx: usize, l: usize) -> f64 {
        self.stages[k - 1].interference[tx * self.k_total + l - 1]
    }

    /// SIR of the stage-`k` link of transmitter `tx` under `mode`; `None` if unmeasured.
    pub fn sir(&self, k: usize, tx: usize, mode: TransmissionMode) -> Option<f64> {
        let s = &self.stages[k - 1];
        if !s.measured[tx] {
            return None;
        }
        let i: f64 = (1..=self.k_total).filter(|&l| mode.coactive(k, l)).map(|l| self.interference(k, tx, l)).sum();
        Some(s.signal[tx] / i)
    }
}

fn path_gain(d2: f64, alpha: f64) -> f64 {
    if alpha == 4.0 {
        1.0 / (d2 * d2)
    } else {
        d2.powf(-0.5 * alpha)
    }
}

struct Active {
    pos: [f64; 2],
    power: f64,
    point: u32,
    cell: u32,
}

/// Simulates every scheduled link of every stage once.
pub fn simulate_links(dep: &Deployment, cfg: &NetworkConfig, opts: LinkOptions) -> LinkSample {
    let k_total = dep.k_total();
    let powers: Vec<Vec<f64>> = dep
        .stages
        .iter()
        .map(|s| {
            s.transmitters
                .iter()
                .zip(&s.assoc)
                .map(|(&t, &r)| cfg.transmit_power(dep.distance(t, s.receivers[r as usize])))
                .collect()
        })
        .collect();
    let slot_cap = opts.max_slots.unwrap_or(usize::MAX);
    let last_slot: Vec<usize> =
        dep.stages.iter().map(|s| s.members.iter().map(Vec::len).max().unwrap_or(0).min(slot_cap)).collect();
    let n_slots = last_slot.iter().copied().max().unwrap_or(0);

    let mut out: Vec<StageLinks> = dep
        .stages
        .iter()
        .map(|s| {
            let n = s.transmitters.len();
            StageLinks { measured: vec![false; n], signal: vec![0.0; n], interference: vec![0.0; n * k_total] }
        })
        .collect();

    let mut active: Vec<Vec<Active>> = (0..k_total).map(|_| Vec::new()).collect();
    for slot in 0..n_slots {
        active.iter_mut().for_each(Vec::clear);
        for (k, s) in dep.stages.iter().enumerate() {
            for (c, m) in s.members.iter().enumerate() {
                if m.is_empty() {
                    continue;
                }
                let tx = m[slot % m.len()] as usize;
                let point = s.transmitters[tx];
                active[k].push(Active {
                    pos: dep.points[point as usize],
                    power: powers[k][tx],
                    point,
                    cell: c as u32,
                });
            }
        }
        for (k, s) in dep.stages.iter().enumerate() {
            if slot >= last_slot[k] {
                continue;
            }
            for (c, m) in s.members.iter().enumerate() {
                if slot >= m.len() {
                    continue;
                }
                let tx = m[slot] as usize;
                let rx_point = s.receivers[c];
                let rx = dep.points[rx_point as usize];
                let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(
                    dep.seed ^ splitmix64(((k as u64) << 40) ^ s.transmitters[tx] as u64),
                ));
                let mut fade = || if opts.fading { rng.sample::<f64, _>(Exp1) } else { 1.0 };
                let d_own = dep.distance(s.transmitters[tx], rx_point);
                let stage_out = &mut out[k];
                stage_out.measured[tx] = true;
                stage_out.signal[tx] = fade() * powers[k][tx] * path_gain(d_own * d_own, cfg.alpha);
                for (l, list) in active.iter().enumerate() {
                    let mut sum = 0.0;
                    for a in list {
                        if (l == k && a.cell == c as u32) || a.point == rx_point {
                            continue;
                        }
                        let d2 = (a.pos[0] - rx[0]).powi(2) + (a.pos[1] - rx[1]).powi(2);
                        sum += fade() * a.power * path_gain(d2, cfg.alpha);
                    }
                    stage_out.interference[tx * k_total + l] = sum;
                }
            }
        }
    }
    LinkSample { k_total, stages: out }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mc::deployment::sample_deployment;
    use crate::model::build_stage_plan;

    fn setup() -> (NetworkConfig, Deployment) {
        let c = NetworkConfig { lambda: 300.0, lambda_bs: 5.0, ..NetworkConfig::reference(1.0, 0.5, 0.0) };
        let plan = build_stage_plan(&c, 0.2, 2).unwrap();
        let d = sample_deployment(&c, &plan, 1.0, 11).unwrap();
        (c, d)
    }

    #[test]
    fn inverted_signal_without_fading() {
        let (c, d) = setup();
        let l = simulate_links(&d, &c, LinkOptions { fading: false, max_slots: None });
        for s in &l.stages {
            assert!(s.measured.iter().all(|&m| m));
            assert!(s.signal.iter().all(|&v| (v - c.p_bar_t).abs() < 1e-9));
        }
    }

    #[test]
    fn more_coactive_stages_lower_sir() {
        let (c, d) = setup();
        let l = simulate_links(&d, &c, LinkOptions::default());
        for k in 1..=2 {
            for tx in 0..d.stage(k).transmitters.len() {
                let seq = l.sir(k, tx, TransmissionMode::Sequential).unwrap();
                let fd = l.sir(k, tx, TransmissionMode::FullDuplexParallel).unwrap();
                assert!(fd <= seq);
            }
        }
    }

    #[test]
    fn slot_cap_limits_measurement() {
        let (c, d) = setup();
        let l = simulate_links(&d, &c, LinkOptions { fading: true, max_slots: Some(2) });
        let s = d.stage(1);
        for m in &s.members {
            for (pos, &tx) in m.iter().enumerate() {
                assert_eq!(l.stages[0].measured[tx as usize], pos < 2);
            }
        }
    }

    #[test]
    fn deterministic() {
        let (c, d) = setup();
        assert_eq!(simulate_links(&d, &c, LinkOptions::default()), simulate_links(&d, &c, LinkOptions::default()));
    }
}
