use m2m_agg::coverage::{
    laplace_interference, laplace_interference_lower_bound, ModeCoverage,
};
use m2m_agg::energy::{stage_cost, total_energy_density, CoverageVector};
use m2m_agg::hops::{k_lower_bound, k_lower_bound_jensen, k_upper_bound, HopCoverage};
use m2m_agg::model::{build_stage_plan, NetworkConfig, TransmissionMode};
use m2m_agg::rate::{load_pmf_auto, RateModel};
use m2m_agg::specfun::{b_alpha, c_alpha, gamma, lower_incomplete_gamma, upper_incomplete_gamma};
use proptest::prelude::*;

fn reference() -> NetworkConfig {
    NetworkConfig::reference(1.0, 0.5, 0.0)
}

fn feasible(gamma: f64, k: usize) -> bool {
    let c = reference();
    k == 1 || c.lambda * gamma.powi(k as i32 - 1) >= c.lambda_bs
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn incomplete_gammas_partition(s in 0.1f64..6.0, x in 1e-3f64..40.0) {
        let total = lower_incomplete_gamma(s, x).unwrap() + upper_incomplete_gamma(s, x).unwrap();
        prop_assert!((total - gamma(s)).abs() <= 1e-9 * gamma(s));
    }

    #[test]
    fn hypergeometric_families_are_monotone(alpha in 2.2f64..6.0, t in 1e-3f64..1e3, f in 1.01f64..4.0) {
        let (c1, c2) = (c_alpha(alpha, t).unwrap(), c_alpha(alpha, t * f).unwrap());
        prop_assert!(c1 > 0.0 && c1 <= 1.0 && c2 < c1);
        let (b1, b2) = (b_alpha(alpha, t).unwrap(), b_alpha(alpha, t * f).unwrap());
        prop_assert!(b1 > 0.0 && b2 <= 1.0 && b2 > b1);
    }

    #[test]
    fn lower_bound_is_below_transform(ratio in 1.0f64..50.0, lambda in 0.05f64..5.0, s in 1e-3f64..1e2) {
        let cfg = NetworkConfig { p_t_max: ratio, ..reference() };
        let l = laplace_interference(&cfg, lambda, s).unwrap().value;
        let lb = laplace_interference_lower_bound(&cfg, lambda, s).unwrap().value;
        prop_assert!(lb <= l * (1.0 + 1e-12));
    }

    #[test]
    fn sir_coverage_nonincreasing_in_threshold(gamma in 0.05f64..0.45, k in 1usize..4, t in 1e-2f64..1e2, f in 1.01f64..3.0) {
        prop_assume!(feasible(gamma, k));
        let cfg = reference();
        let plan = build_stage_plan(&cfg, gamma, k).unwrap();
        for mode in TransmissionMode::ALL {
            let m = ModeCoverage::new(&cfg, &plan, mode).unwrap();
            let (a, b) = (m.coverage(t).unwrap(), m.coverage(t * f).unwrap());
            prop_assert!(b.total() <= a.total() + 1e-12);
            for (x, y) in a.per_stage.iter().zip(&b.per_stage) {
                prop_assert!(y <= &(x + 1e-12));
            }
        }
    }

    #[test]
    fn rate_coverage_nonincreasing_in_threshold(gamma in 0.05f64..0.45, k in 1usize..3, rho in 10f64..1e4, f in 1.01f64..3.0) {
        prop_assume!(feasible(gamma, k));
        let cfg = reference();
        let plan = build_stage_plan(&cfg, gamma, k).unwrap();
        for mode in TransmissionMode::ALL {
            let m = RateModel::new(&cfg, &plan, mode, None).unwrap();
            let (a, b) = (m.coverage(rho).unwrap().probability, m.coverage(rho * f).unwrap().probability);
            prop_assert!((0.0..=1.0).contains(&a) && b <= a + 1e-12);
        }
    }

    #[test]
    fn sequential_never_below_full_duplex_sir(gamma in 0.05f64..0.45, k in 2usize..4, t in 1e-2f64..1e2) {
        prop_assume!(feasible(gamma, k));
        let cfg = reference();
        let plan = build_stage_plan(&cfg, gamma, k).unwrap();
        let seq = ModeCoverage::new(&cfg, &plan, TransmissionMode::Sequential).unwrap();
        let fd = ModeCoverage::new(&cfg, &plan, TransmissionMode::FullDuplexParallel).unwrap();
        let hd = ModeCoverage::new(&cfg, &plan, TransmissionMode::HalfDuplexParallel).unwrap();
        prop_assert!(hd.coverage(t).unwrap().total() >= fd.coverage(t).unwrap().total() - 1e-12);
        for stage in 1..=k {
            prop_assert!(fd.stage_coverage(stage, t).unwrap() <= seq.stage_coverage(stage, t).unwrap() + 1e-12);
        }
    }

    #[test]
    fn load_pmf_is_a_distribution(mu in 0.05f64..300.0) {
        let p = load_pmf_auto(mu, 1.0).unwrap();
        let mass: f64 = p.probs.iter().sum();
        prop_assert!((mass + p.tail_mass - 1.0).abs() < 1e-9);
        prop_assert!(p.tail_mass < 1e-6);
        prop_assert!((p.mean() - mu).abs() < 1e-4 * mu.max(1.0));
    }

    #[test]
    fn stage_cost_rises_with_stage(gamma in 0.02f64..0.49, k_total in 3usize..7) {
        prop_assume!(feasible(gamma, k_total));
        let cfg = reference();
        let plan = build_stage_plan(&cfg, gamma, k_total).unwrap();
        for k in 1..k_total - 1 {
            prop_assert!(stage_cost(&cfg, &plan, k).unwrap() < stage_cost(&cfg, &plan, k + 1).unwrap());
        }
    }

    #[test]
    fn last_stage_cost_falls_with_stage_count(gamma in 0.02f64..0.49, k_total in 2usize..6) {
        prop_assume!(feasible(gamma, k_total + 1));
        let cfg = reference();
        let a = build_stage_plan(&cfg, gamma, k_total).unwrap();
        let b = build_stage_plan(&cfg, gamma, k_total + 1).unwrap();
        prop_assert!(stage_cost(&cfg, &b, k_total + 1).unwrap() < stage_cost(&cfg, &a, k_total).unwrap());
    }

    #[test]
    fn coverage_scaling_only_lowers_energy(gamma in 0.05f64..0.45, k in 2usize..4, p in 0.0f64..1.0) {
        prop_assume!(feasible(gamma, k));
        let cfg = reference();
        let plan = build_stage_plan(&cfg, gamma, k).unwrap();
        let upper = total_energy_density(&cfg, &plan, &CoverageVector::ones(k)).unwrap().total;
        let cov = CoverageVector::from_stage_probs(&vec![p; k], k).unwrap();
        prop_assert!(total_energy_density(&cfg, &plan, &cov).unwrap().total <= upper);
    }

    #[test]
    fn hop_upper_bound_monotone(eps in 0.01f64..0.5, t in 0.01f64..1.0, de in 1.0f64..1.5, dt in 1.0f64..3.0) {
        let cfg = reference();
        let k = |e: f64, t: f64| k_upper_bound(&cfg, HopCoverage::OpenLoop { t }, e).unwrap();
        prop_assert!(k((eps * de).min(0.99), t) >= k(eps, t));
        prop_assert!(k(eps, t * dt) <= k(eps, t));
        prop_assert!(k(eps, t) >= 1);
    }

    #[test]
    fn jensen_ordering_and_cap_monotonicity(mu in 1.0f64..200.0, lambda_a in 0.5f64..100.0, ratio in 1e-6f64..0.5) {
        let cfg = NetworkConfig { p_bar_t: 1e-6, p_t_max: 1.0, ..reference() };
        let lambda_u = mu * lambda_a;
        let p_r_min = ratio * cfg.p_t_max;
        let kl = k_lower_bound(&cfg, lambda_u, lambda_a, p_r_min).unwrap();
        prop_assert!(k_lower_bound_jensen(&cfg, lambda_u, lambda_a, p_r_min).unwrap() <= kl);
        let tighter = NetworkConfig { p_t_max: 0.5 * (cfg.p_t_max + p_r_min), ..cfg };
        prop_assert!(k_lower_bound(&tighter, lambda_u, lambda_a, p_r_min).unwrap() >= kl);
    }
}
