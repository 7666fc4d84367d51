#[path = "common/oracle.rs"]
mod oracle;

use std::f64::consts::PI;

use m2m_agg::coverage::{
    laplace_inter_stage, laplace_interference, laplace_interference_lower_bound, open_loop_coverage,
    sir_coverage_lower_bound, sir_coverage_single,
};
use m2m_agg::model::{build_stage_plan, NetworkConfig};

fn capped(alpha: f64, ratio: f64) -> NetworkConfig {
    NetworkConfig { alpha, p_t_max: ratio, ..NetworkConfig::reference(1.0, 0.5, 0.0) }
}

// Exponent of the interference transform straight from the PGFL integral over
// the squared link distance v ~ Exp(πλ) and the normalized interferer distance t.
fn intra_exponent_oracle(cfg: &NetworkConfig, lambda: f64, s: f64, t_lo: f64) -> f64 {
    let (a, pl) = (cfg.alpha, PI * lambda);
    let rc2 = (cfg.p_t_max / cfg.p_bar_t).powf(2.0 / a);
    let inner_t = |v: f64, power: f64| {
        // ∫ v / (1 + t^{α/2} v^{α/2} / (s P)) dt, with P the transmit power over v^{α/2}
        let g = |t: f64| v / (1.0 + (t * v).powf(a / 2.0) / (s * power));
        if t_lo == 0.0 {
            oracle::tanh_sinh(g, 0.0, 1.0, 1e-12) + oracle::exp_sinh(g, 1.0, 1e-12)
        } else {
            oracle::exp_sinh(g, 1.0, 1e-12)
        }
    };
    let near = oracle::tanh_sinh(
        |v| inner_t(v, cfg.p_bar_t * v.powf(a / 2.0)) * pl * (-pl * v).exp(),
        0.0,
        rc2,
        1e-12,
    );
    let far = oracle::exp_sinh(|v| inner_t(v, cfg.p_t_max) * pl * (-pl * v).exp(), rc2, 1e-12);
    pl * (near + far)
}

#[test]
fn intra_transform_matches_pgfl_integral() {
    for &(alpha, ratio, lambda) in &[(4.0, 1.0, 1.0), (4.0, 5.0, 0.5), (3.0, 2.0, 1.0), (3.5, 20.0, 0.3)] {
        let cfg = capped(alpha, ratio);
        for &s in &[0.05, 0.3, 1.0, 4.0] {
            let got = laplace_interference(&cfg, lambda, s).unwrap().value;
            let want = (-intra_exponent_oracle(&cfg, lambda, s, 1.0)).exp();
            assert!((got - want).abs() <= 1e-7 * want, "α={alpha} ratio={ratio} λ={lambda} s={s}: {got} vs {want}");
        }
    }
}

#[test]
fn inter_transform_matches_pgfl_integral() {
    let cfg = NetworkConfig { lambda: 100.0, ..capped(4.0, 2.0) };
    let plan = build_stage_plan(&cfg, 0.2, 3).unwrap();
    let ones = vec![1.0; 3];
    for &s in &[0.1, 1.0, 3.0] {
        let got = laplace_inter_stage(&cfg, &plan, 1, &[2, 3], &ones, s).unwrap().value;
        let e: f64 = [2usize, 3]
            .iter()
            .map(|&l| intra_exponent_oracle(&cfg, plan.stages[l - 1].lambda_a, s, 0.0))
            .sum();
        let want = (-e).exp();
        assert!((got - want).abs() <= 1e-7 * want, "s={s}: {got} vs {want}");
    }
}

#[test]
fn lower_bound_never_exceeds_transform() {
    for &(alpha, ratio, lambda) in &[(4.0, 1.0, 1.0), (4.0, 5.0, 1.0), (4.0, 10.0, 0.2), (4.0, 20.0, 1.0), (3.0, 2.0, 1.0)] {
        let cfg = capped(alpha, ratio);
        for i in 0..30 {
            let s = 1e-3 * 1e5f64.powf(i as f64 / 29.0);
            let l = laplace_interference(&cfg, lambda, s).unwrap().value;
            let lb = laplace_interference_lower_bound(&cfg, lambda, s).unwrap().value;
            assert!(lb <= l * (1.0 + 1e-12), "α={alpha} ratio={ratio} s={s}: {lb} > {l}");
        }
        for &t in &[0.1, 1.0, 10.0] {
            assert!(sir_coverage_lower_bound(&cfg, lambda, t).unwrap() <= sir_coverage_single(&cfg, lambda, t).unwrap() + 1e-12);
        }
    }
}

#[test]
fn open_loop_limit_from_large_cap() {
    for &t in &[0.01, 0.1, 1.0, 10.0] {
        let cfg = capped(4.0, 1e9);
        let got = sir_coverage_single(&cfg, 1.0, t).unwrap();
        assert!((got - open_loop_coverage(4.0, t).unwrap()).abs() < 1e-5, "t={t}");
    }
    assert!((open_loop_coverage(4.0, 1.0).unwrap() - (-PI / 4.0).exp()).abs() < 1e-12);
}
