#[path = "common/oracle.rs"]
mod oracle;

use m2m_agg::specfun::{b_alpha, c_alpha, lower_incomplete_gamma, upper_incomplete_gamma};

const REL: f64 = 1e-7;

fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64)).collect()
}

fn assert_close(got: f64, want: f64, what: &str) {
    assert!((got - want).abs() <= REL * want.abs(), "{what}: got {got:e}, oracle {want:e}");
}

#[test]
fn lower_gamma_matches_quadrature() {
    for &s in &[0.3, 1.0, 2.0, 3.0, 4.5] {
        for x in grid(1e-3, 40.0, 50) {
            assert_close(lower_incomplete_gamma(s, x).unwrap(), oracle::lower_gamma(s, x), &format!("γ({s}, {x})"));
        }
    }
}

#[test]
fn upper_gamma_matches_quadrature() {
    for &s in &[-2.5, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 3.5] {
        for x in grid(0.05, 30.0, 50) {
            assert_close(upper_incomplete_gamma(s, x).unwrap(), oracle::upper_gamma(s, x), &format!("Γ({s}, {x})"));
        }
    }
}

#[test]
fn hypergeometric_families_match_quadrature() {
    for &alpha in &[2.5, 3.0, 3.5, 4.0, 5.0, 6.0] {
        for t in grid(1e-4, 1e4, 50) {
            let c = oracle::unit_family(1.0 - 2.0 / alpha, t);
            assert_close(c_alpha(alpha, t).unwrap(), c, &format!("C_{alpha}({t})"));
            let b = oracle::unit_family(2.0 / alpha, 1.0 / t);
            assert_close(b_alpha(alpha, t).unwrap(), b, &format!("B_{alpha}({t})"));
        }
    }
}

#[test]
fn grid_evaluation_is_fast() {
    let start = std::time::Instant::now();
    for t in grid(1e-4, 1e4, 50) {
        c_alpha(4.0, t).unwrap();
        b_alpha(3.0, t).unwrap();
        upper_incomplete_gamma(-0.5, t.min(50.0)).unwrap();
        lower_incomplete_gamma(2.0, t).unwrap();
    }
    assert!(start.elapsed().as_secs_f64() < 1.0);
}
