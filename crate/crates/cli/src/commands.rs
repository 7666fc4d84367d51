//! Subcommand implementations. Each returns the table and run description;
//! `main` handles files and exit codes.

use clap::{Args, ValueEnum};
use m2m_agg::coverage::{sir_coverage_single, ModeCoverage};
use m2m_agg::energy::{
    mean_na, mean_uplink_power, optimize_gamma, second_moment_na, total_energy_density, CoverageVector,
    Precondition,
};
use m2m_agg::hops::{k_lower_fixed_point, k_upper_bound, HopCoverage};
use m2m_agg::mc::{
    measure_load_moments, measure_pa_power, measure_stage_correlation, region_warning, run_mode_experiment,
    LinkOptions, McEstimate, McSettings, ModeExperiment, ModeReport,
};
use m2m_agg::model::{build_stage_plan, NetworkConfig, StagePlan, TransmissionMode};
use m2m_agg::rate::{idle_probability, load_pmf_auto, RateModel};

use crate::config::Resolved;
use crate::error::CliError;
use crate::grid::{parse_counts, parse_grid};
use crate::output::{num, opt, PlotSpec, RunSpec, Table};

pub struct Run {
    pub spec: RunSpec,
    pub table: Table,
    pub plot: Option<PlotSpec>,
}

fn parse_modes(spec: &str) -> Result<Vec<TransmissionMode>, CliError> {
    spec.split(',').map(|m| m.trim().parse().map_err(CliError::from)).collect()
}

fn pairs(items: &[(&str, String)]) -> Vec<(String, String)> {
    items.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

#[derive(Debug, Args)]
pub struct EnergySweepArgs {
    /// Stage counts K; the K = 1 direct baseline is always included
    #[arg(long, default_value = "1,2,3,4,5,6")]
    pub k: String,
    /// Aggregator fractions γ (grid syntax); infeasible values for a K are skipped
    #[arg(long, default_value = "log:0.001:0.499:100")]
    pub gamma: String,
}

pub fn energy_sweep(cfg: &Resolved, a: &EnergySweepArgs) -> Result<Run, CliError> {
    let net = &cfg.net;
    let mut ks = parse_counts(&a.k)?;
    ks.push(1);
    ks.sort_unstable();
    ks.dedup();
    let gammas = sorted(parse_grid(&a.gamma)?);
    let direct = total_energy_density(net, &build_stage_plan(net, 0.25, 1)?, &CoverageVector::ones(1))?.total;
    let mut table = Table::new(&["k", "gamma", "e_total", "is_opt", "e_direct"]);
    for &k in &ks {
        let opt_gamma = if k > 1 {
            let o = optimize_gamma(net, k, |p| Ok(CoverageVector::ones(p.k_total)))?;
            let pre = match o.precondition {
                Precondition::Holds => "holds".to_string(),
                Precondition::Fails { at_gamma } => format!("fails at gamma={at_gamma}"),
                Precondition::NotApplicable => "n/a".to_string(),
            };
            table.notes.push(format!("K={k} gamma_opt={} e_opt={} monotone-last-stage-cost {pre}", o.gamma_opt, o.energy.total));
            Some(o.gamma_opt)
        } else {
            None
        };
        let mut rows: Vec<(f64, bool)> = gammas.iter().map(|&g| (g, false)).collect();
        if let Some(g) = opt_gamma {
            rows.push((g, true));
            rows.sort_by(|x, y| x.0.total_cmp(&y.0));
        }
        for (g, is_opt) in rows {
            let plan = match build_stage_plan(net, g, k) {
                Ok(p) => p,
                Err(m2m_agg::Error::Degenerate(_)) => continue,
                Err(e) => return Err(e.into()),
            };
            let e = total_energy_density(net, &plan, &CoverageVector::ones(k))?.total;
            table.push(vec![k.to_string(), num(g), num(e), u8::from(is_opt).to_string(), num(direct)]);
        }
    }
    table.notes.push("energy density in mW x payload slots per km^2; infeasible gamma omitted".into());
    Ok(Run {
        spec: RunSpec {
            command: "energy-sweep",
            config: cfg.echo(),
            params: pairs(&[("k", a.k.clone()), ("gamma", a.gamma.clone())]),
            seed: None,
        },
        table,
        plot: Some(PlotSpec { x: "gamma", y: "e_total", log_x: true }),
    })
}

#[derive(Debug, Args)]
pub struct CoverageArgs {
    /// Transmission modes: sequential|full-duplex|half-duplex (or seq|fd|hd)
    #[arg(long, default_value = "sequential,full-duplex,half-duplex")]
    pub mode: String,
    /// SIR thresholds T (linear, grid syntax)
    #[arg(long, default_value = "log:0.01:100:41")]
    pub t: String,
    /// Number of stages K
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    /// Aggregator fraction γ
    #[arg(long, default_value_t = 0.1)]
    pub gamma: f64,
}

pub fn coverage(cfg: &Resolved, a: &CoverageArgs) -> Result<Run, CliError> {
    let plan = build_stage_plan(&cfg.net, a.gamma, a.k)?;
    let ts = parse_grid(&a.t)?;
    let mut cols = vec!["mode".to_string(), "k".into(), "t".into(), "coverage".into()];
    cols.extend((1..=a.k).map(|k| format!("stage_{k}")));
    let mut table = Table::new(&cols);
    for mode in parse_modes(&a.mode)? {
        let mc = ModeCoverage::new(&cfg.net, &plan, mode)?;
        for &t in &ts {
            let c = mc.coverage(t)?;
            let mut row = vec![mode.to_string(), a.k.to_string(), num(t), num(c.total())];
            for k in 1..=a.k {
                row.push(c.stages.iter().position(|&s| s == k).map(|i| num(c.per_stage[i])).unwrap_or_default());
            }
            table.push(row);
        }
    }
    table.notes.push("stage columns are per-hop P(SIR>T); stages outside the mode's product are blank".into());
    Ok(Run {
        spec: RunSpec {
            command: "coverage",
            config: cfg.echo(),
            params: pairs(&[("mode", a.mode.clone()), ("t", a.t.clone()), ("k", a.k.to_string()), ("gamma", a.gamma.to_string())]),
            seed: None,
        },
        table,
        plot: Some(PlotSpec { x: "t", y: "coverage", log_x: true }),
    })
}

/// Monte Carlo flags shared by the simulating commands.
#[derive(Debug, Clone, Args)]
pub struct McArgs {
    /// Independent deployments
    #[arg(long, default_value_t = 100)]
    pub deployments: usize,
    /// Root seed
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Window half-width R (km); the window is [-R, R]^2
    #[arg(long, default_value_t = 2.5)]
    pub half_width: f64,
    /// Measure only the first N TDMA slots of each cell
    #[arg(long)]
    pub max_slots: Option<usize>,
    /// Disable Rayleigh fading
    #[arg(long)]
    pub no_fading: bool,
}

impl McArgs {
    fn settings(&self) -> Result<McSettings, CliError> {
        Ok(McSettings::new(self.half_width, self.deployments, self.seed)?)
    }

    fn links(&self) -> LinkOptions {
        LinkOptions { fading: !self.no_fading, max_slots: self.max_slots }
    }

    fn params(&self) -> Vec<(String, String)> {
        pairs(&[
            ("deployments", self.deployments.to_string()),
            ("half_width", self.half_width.to_string()),
            ("max_slots", self.max_slots.map(|m| m.to_string()).unwrap_or_else(|| "all".into())),
            ("fading", (!self.no_fading).to_string()),
        ])
    }
}

#[derive(Debug, Args)]
pub struct RateCdfArgs {
    /// Transmission modes
    #[arg(long, default_value = "sequential,full-duplex,half-duplex")]
    pub mode: String,
    /// Rate thresholds ρ (bit/s, grid syntax)
    #[arg(long, default_value = "log:10:100000:41")]
    pub rho: String,
    /// Stage counts K
    #[arg(long, default_value = "1,2,3")]
    pub k: String,
    /// Power caps as multiples of P̄_T; `inf` for none. Overrides the configured P_Tmax
    #[arg(long, default_value = "inf")]
    pub pmax_ratios: String,
    /// Aggregator fraction γ
    #[arg(long, default_value_t = 0.1)]
    pub gamma: f64,
    /// Load PMF truncation; automatic when absent
    #[arg(long)]
    pub l_max: Option<usize>,
    /// Append Monte Carlo coverage, its 95% half-width and the analytic-minus-empirical gap
    #[arg(long)]
    pub simulate: bool,
    #[command(flatten)]
    pub mc: McArgs,
}

pub fn rate_cdf(cfg: &Resolved, a: &RateCdfArgs) -> Result<Run, CliError> {
    let modes = parse_modes(&a.mode)?;
    let rhos = parse_grid(&a.rho)?;
    let ks = parse_counts(&a.k)?;
    let ratios = parse_grid(&a.pmax_ratios)?;
    let mut cols = vec!["mode", "k", "pmax_ratio", "rho", "coverage", "truncation_mass"];
    if a.simulate {
        cols.extend(["mc_coverage", "mc_half_width", "gap"]);
    }
    let mut table = Table::new(&cols);
    for &ratio in &ratios {
        let net = NetworkConfig { p_t_max: ratio * cfg.net.p_bar_t, ..cfg.net };
        net.validate()?;
        for &k in &ks {
            let plan = build_stage_plan(&net, a.gamma, k)?;
            let reports = if a.simulate { Some(simulate_modes(&net, &plan, &modes, &[], &rhos, 1.0, &a.mc, &mut table)?) } else { None };
            for (i, &mode) in modes.iter().enumerate() {
                let model = RateModel::new(&net, &plan, mode, a.l_max)?;
                for (j, &rho) in rhos.iter().enumerate() {
                    let c = model.coverage(rho)?;
                    let mut row =
                        vec![mode.to_string(), k.to_string(), num(ratio), num(rho), num(c.probability), num(c.truncation_mass)];
                    if let Some(r) = &reports {
                        let e = r[i].path_rate[j];
                        row.extend([num(e.mean), num(e.half_width_95), num(c.probability - e.mean)]);
                    }
                    table.push(row);
                }
            }
        }
    }
    let mut params = pairs(&[
        ("mode", a.mode.clone()),
        ("rho", a.rho.clone()),
        ("k", a.k.clone()),
        ("pmax_ratios", a.pmax_ratios.clone()),
        ("gamma", a.gamma.to_string()),
        ("l_max", a.l_max.map(|l| l.to_string()).unwrap_or_else(|| "auto".into())),
        ("simulate", a.simulate.to_string()),
    ]);
    if a.simulate {
        params.extend(a.mc.params());
    }
    Ok(Run {
        spec: RunSpec { command: "rate-cdf", config: cfg.echo(), params, seed: a.simulate.then_some(a.mc.seed) },
        table,
        plot: Some(PlotSpec { x: "rho", y: "coverage", log_x: true }),
    })
}

#[allow(clippy::too_many_arguments)]
fn simulate_modes(
    net: &NetworkConfig,
    plan: &StagePlan,
    modes: &[TransmissionMode],
    ts: &[f64],
    rhos: &[f64],
    energy_sir: f64,
    mc: &McArgs,
    table: &mut Table,
) -> Result<Vec<ModeReport>, CliError> {
    let settings = mc.settings()?;
    if let Some(w) = region_warning(plan, settings.half_width) {
        table.notes.push(format!("warning: {w}"));
    }
    let exp = ModeExperiment {
        modes: modes.to_vec(),
        sir_thresholds: ts.to_vec(),
        rate_thresholds: rhos.to_vec(),
        energy_sir,
        links: mc.links(),
    };
    Ok(run_mode_experiment(net, plan, &settings, &exp)?)
}

#[derive(Debug, Args)]
pub struct HopsArgs {
    /// Outage budgets ε (grid syntax)
    #[arg(long, default_value = "lin:0.01:0.5:50")]
    pub epsilon: String,
    /// SIR thresholds T
    #[arg(long, default_value = "0.01,0.1,1")]
    pub t: String,
    /// Aggregator fraction γ used by the lower bound
    #[arg(long, default_value_t = 0.1)]
    pub gamma: f64,
}

pub fn hops(cfg: &Resolved, a: &HopsArgs) -> Result<Run, CliError> {
    let net = &cfg.net;
    let p_r_min = cfg.require_p_r_min()?;
    let eps = parse_grid(&a.epsilon)?;
    let ts = parse_grid(&a.t)?;
    let k_lower = if net.p_t_max.is_infinite() { 1 } else { k_lower_fixed_point(net, a.gamma, p_r_min)? };
    let mut table = Table::new(&["epsilon", "t", "k_upper", "k_lower"]);
    for &t in &ts {
        let single;
        let cov = if net.p_t_max.is_infinite() {
            HopCoverage::OpenLoop { t }
        } else {
            single = [sir_coverage_single(net, net.lambda * a.gamma, t)?];
            HopCoverage::PerStage(&single)
        };
        for &e in &eps {
            table.push(vec![num(e), num(t), k_upper_bound(net, cov, e)?.to_string(), k_lower.to_string()]);
        }
    }
    Ok(Run {
        spec: RunSpec {
            command: "hops",
            config: cfg.echo(),
            params: pairs(&[("epsilon", a.epsilon.clone()), ("t", a.t.clone()), ("gamma", a.gamma.to_string())]),
            seed: None,
        },
        table,
        plot: Some(PlotSpec { x: "epsilon", y: "k_upper", log_x: false }),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Metric {
    Sir,
    Rate,
}

#[derive(Debug, Args)]
pub struct TradeoffArgs {
    /// Number of stages K
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    /// Aggregator fraction γ
    #[arg(long, default_value_t = 0.1)]
    pub gamma: f64,
    /// Transmission modes
    #[arg(long, default_value = "sequential,full-duplex,half-duplex")]
    pub modes: String,
    /// Threshold kind: SIR T (linear) or rate ρ (bit/s)
    #[arg(long, value_enum, default_value_t = Metric::Sir)]
    pub metric: Metric,
    /// Thresholds (grid syntax)
    #[arg(long, default_value = "log:0.01:100:41")]
    pub thresholds: String,
}

pub fn tradeoff(cfg: &Resolved, a: &TradeoffArgs) -> Result<Run, CliError> {
    let net = &cfg.net;
    let plan = build_stage_plan(net, a.gamma, a.k)?;
    let ths = parse_grid(&a.thresholds)?;
    let upper = total_energy_density(net, &plan, &CoverageVector::ones(a.k))?.total;
    let mut table = Table::new(&["mode", "threshold", "outage", "energy", "energy_upper"]);
    for mode in parse_modes(&a.modes)? {
        let sir = ModeCoverage::new(net, &plan, mode)?;
        let rate = RateModel::new(net, &plan, mode, None)?;
        for &th in &ths {
            // Per-hop success of every stage; stages outside a rate product count as delivered.
            let (coverage, per_stage) = match a.metric {
                Metric::Sir => {
                    let per = (1..=a.k).map(|k| sir.stage_coverage(k, th)).collect::<m2m_agg::Result<Vec<_>>>()?;
                    (sir.coverage(th)?.total(), per)
                }
                Metric::Rate => {
                    let c = rate.coverage(th)?;
                    let mut per = vec![1.0; a.k];
                    for (s, p) in sir.stages().into_iter().zip(&c.per_stage) {
                        per[s - 1] = *p;
                    }
                    (c.probability, per)
                }
            };
            let e = total_energy_density(net, &plan, &CoverageVector::from_stage_probs(&per_stage, a.k)?)?.total;
            table.push(vec![mode.to_string(), num(th), num(1.0 - coverage), num(e), num(upper)]);
        }
    }
    let metric = match a.metric {
        Metric::Sir => "sir",
        Metric::Rate => "rate",
    };
    Ok(Run {
        spec: RunSpec {
            command: "tradeoff",
            config: cfg.echo(),
            params: pairs(&[
                ("k", a.k.to_string()),
                ("gamma", a.gamma.to_string()),
                ("modes", a.modes.clone()),
                ("metric", metric.into()),
                ("thresholds", a.thresholds.clone()),
            ]),
            seed: None,
        },
        table,
        plot: Some(PlotSpec { x: "outage", y: "energy", log_x: false }),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Experiment {
    /// Mean amplifier power per cell against the closed form
    PaPower,
    /// Cell load moments and PMF distance
    Load,
    /// Pearson correlation of adjacent-stage loads over a γ list
    Correlation,
    /// SIR, rate and energy per transmission mode
    Modes,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum)]
    pub experiment: Experiment,
    /// Aggregator fractions γ; experiments other than correlation use the first
    #[arg(long, default_value = "0.1")]
    pub gamma: String,
    /// Number of stages K
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    /// Transmission modes (modes experiment)
    #[arg(long, default_value = "sequential,full-duplex,half-duplex")]
    pub modes: String,
    /// SIR thresholds (modes experiment)
    #[arg(long, default_value = "0.1,1,10")]
    pub t: String,
    /// Rate thresholds in bit/s (modes experiment)
    #[arg(long, default_value = "log:100:30000:10")]
    pub rho: String,
    /// SIR a hop must exceed to count as delivered in the energy estimate
    #[arg(long, default_value_t = 1.0)]
    pub energy_sir: f64,
    #[command(flatten)]
    pub mc: McArgs,
}

fn estimate_row(table: &mut Table, quantity: &str, mode: &str, stage: String, threshold: String, e: Option<McEstimate>, analytic: Option<f64>) {
    let gap = match (e, analytic) {
        (Some(e), Some(a)) => num(a - e.mean),
        _ => String::new(),
    };
    table.push(vec![
        quantity.into(),
        mode.into(),
        stage,
        threshold,
        opt(e.map(|e| e.mean)),
        opt(e.map(|e| e.half_width_95)),
        e.map(|e| e.n_samples.to_string()).unwrap_or_default(),
        opt(analytic),
        gap,
    ]);
}

const ESTIMATE_COLUMNS: [&str; 9] =
    ["quantity", "mode", "stage", "threshold", "mc_mean", "mc_half_width", "n_samples", "analytic", "gap"];

/// Turns "too few samples" into an empty estimate and passes other errors through.
fn sparse(r: m2m_agg::Result<McEstimate>) -> Result<Option<McEstimate>, CliError> {
    match r {
        Ok(e) => Ok(Some(e)),
        Err(m2m_agg::Error::Degenerate(_)) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

pub fn simulate(cfg: &Resolved, a: &SimulateArgs) -> Result<Run, CliError> {
    let net = &cfg.net;
    let gammas = parse_grid(&a.gamma)?;
    let settings = a.mc.settings()?;
    let mut params = pairs(&[("gamma", a.gamma.clone()), ("k", a.k.to_string())]);
    let (name, table) = match a.experiment {
        Experiment::PaPower | Experiment::Load => {
            let plan = build_stage_plan(net, gammas[0], a.k)?;
            let mut table = Table::new(&ESTIMATE_COLUMNS);
            if let Some(w) = region_warning(&plan, settings.half_width) {
                table.notes.push(format!("warning: {w}"));
            }
            for k in 1..=a.k {
                let st = plan.stage(k)?;
                if a.experiment == Experiment::PaPower {
                    let e = sparse(measure_pa_power(net, &plan, k, &settings))?;
                    let an = mean_uplink_power(net, st.lambda_u, st.lambda_a)?;
                    estimate_row(&mut table, "pa_power", "", k.to_string(), String::new(), e, Some(an));
                    continue;
                }
                let m = match measure_load_moments(net, &plan, k, &settings) {
                    Ok(m) => Some(m),
                    Err(m2m_agg::Error::Degenerate(_)) => None,
                    Err(e) => return Err(e.into()),
                };
                let mu = mean_na(st.lambda_u, st.lambda_a)?;
                let rows = [
                    ("load_mean", m.as_ref().map(|m| m.mean), mu),
                    ("load_second_moment", m.as_ref().map(|m| m.second), second_moment_na(st.lambda_u, st.lambda_a)?),
                    ("load_idle", m.as_ref().map(|m| m.idle), idle_probability(mu)),
                ];
                for (q, e, an) in rows {
                    estimate_row(&mut table, q, "", k.to_string(), String::new(), e, Some(an));
                }
                if let Some(m) = &m {
                    let chi = m.chi_square_distance(&load_pmf_auto(st.lambda_u, st.lambda_a)?);
                    table.push(vec!["load_chi_square".into(), String::new(), k.to_string(), String::new(), num(chi), String::new(), String::new(), String::new(), String::new()]);
                }
            }
            (if a.experiment == Experiment::PaPower { "pa-power" } else { "load" }, table)
        }
        Experiment::Correlation => {
            let rows = measure_stage_correlation(net, &gammas, a.k, &settings)?;
            let mut table = Table::new(&["gamma", "k", "rho", "ci_low", "ci_high", "n_pairs"]);
            table.notes.push("rho pairs each stage-k load with the load of its stage-(k+1) receiver; nan below 100 pairs".into());
            for r in rows {
                table.push(vec![num(r.gamma), r.k.to_string(), num(r.rho), num(r.ci_low), num(r.ci_high), r.n_pairs.to_string()]);
            }
            ("correlation", table)
        }
        Experiment::Modes => {
            let plan = build_stage_plan(net, gammas[0], a.k)?;
            let modes = parse_modes(&a.modes)?;
            let ts = parse_grid(&a.t)?;
            let rhos = parse_grid(&a.rho)?;
            let mut table = Table::new(&ESTIMATE_COLUMNS);
            let reports = simulate_modes(net, &plan, &modes, &ts, &rhos, a.energy_sir, &a.mc, &mut table)?;
            for r in &reports {
                let mode = r.mode.to_string();
                let sir = ModeCoverage::new(net, &plan, r.mode)?;
                let rate = RateModel::new(net, &plan, r.mode, None)?;
                for k in 1..=a.k {
                    for (i, &t) in ts.iter().enumerate() {
                        let an = sir.stage_coverage(k, t)?;
                        estimate_row(&mut table, "stage_sir", &mode, k.to_string(), num(t), Some(r.stage_sir[k - 1][i]), Some(an));
                    }
                }
                for (i, &t) in ts.iter().enumerate() {
                    estimate_row(&mut table, "path_sir", &mode, "all".into(), num(t), Some(r.path_sir[i]), Some(sir.coverage(t)?.total()));
                }
                for (i, &rho) in rhos.iter().enumerate() {
                    let an = rate.coverage(rho)?.probability;
                    estimate_row(&mut table, "path_rate", &mode, "all".into(), num(rho), Some(r.path_rate[i]), Some(an));
                }
                let per = (1..=a.k).map(|k| sir.stage_coverage(k, a.energy_sir)).collect::<m2m_agg::Result<Vec<_>>>()?;
                let an = total_energy_density(net, &plan, &CoverageVector::from_stage_probs(&per, a.k)?)?;
                let th = num(a.energy_sir);
                for k in 1..=a.k {
                    let e = r.stage_energy.as_ref().map(|s| s[k - 1]);
                    estimate_row(&mut table, "energy", &mode, k.to_string(), th.clone(), e, Some(an.per_stage[k - 1]));
                }
                estimate_row(&mut table, "energy", &mode, "all".into(), th.clone(), r.total_energy, Some(an.total));
            }
            table.notes.push("gap = analytic - mc_mean; half-duplex analytic path values use odd stages only".into());
            params.extend(pairs(&[
                ("modes", a.modes.clone()),
                ("t", a.t.clone()),
                ("rho", a.rho.clone()),
                ("energy_sir", a.energy_sir.to_string()),
            ]));
            ("modes", table)
        }
    };
    params.insert(0, ("experiment".into(), name.into()));
    params.extend(a.mc.params());
    Ok(Run {
        spec: RunSpec { command: "simulate", config: cfg.echo(), params, seed: Some(a.mc.seed) },
        table,
        plot: None,
    })
}
