//! Incomplete gamma functions and the two Gauss hypergeometric families
//! `2F1(1, b; b+1; -t)` that parameterize the interference transforms.

use std::f64::consts::PI;

use crate::error::{domain, Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const TINY: f64 = 1e-300;

/// Series and continued-fraction stopping rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rel: f64,
    pub max_terms: usize,
}

impl Tolerance {
    pub fn new(rel: f64, max_terms: usize) -> Result<Self> {
        if !(rel > 0.0 && rel < 1e-3) {
            return Err(domain(format!("tolerance rel must lie in (0, 1e-3), got {rel}")));
        }
        if max_terms < 100 {
            return Err(domain(format!("max_terms must be at least 100, got {max_terms}")));
        }
        Ok(Self { rel, max_terms })
    }

    // Per-term cutoff; series tails are a few terms' worth, so stop well below `rel`.
    fn stop(&self) -> f64 {
        (self.rel * 1e-4).max(4.0 * f64::EPSILON)
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { rel: 1e-10, max_terms: 10_000 }
    }
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural log of the gamma function for `x > 0` (Lanczos, g = 7).
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        (PI / (PI * x).sin()).ln() - ln_gamma(1.0 - x)
    } else {
        let x = x - 1.0;
        let t = x + LANCZOS_G + 0.5;
        let mut a = LANCZOS[0];
        for (i, c) in LANCZOS.iter().enumerate().skip(1) {
            a += c / (x + i as f64);
        }
        0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
    }
}

/// Gamma function for `x > 0`.
pub fn gamma(x: f64) -> f64 {
    ln_gamma(x).exp()
}

/// Lower incomplete gamma `γ(s, x)` with the default tolerance.
///
/// # Example
/// ```
/// let v = m2m_agg::specfun::lower_incomplete_gamma(1.0, 1.0).unwrap();
/// assert!((v - (1.0 - (-1.0f64).exp())).abs() < 1e-12);
/// ```
pub fn lower_incomplete_gamma(s: f64, x: f64) -> Result<f64> {
    lower_incomplete_gamma_tol(s, x, Tolerance::default())
}

pub fn lower_incomplete_gamma_tol(s: f64, x: f64, tol: Tolerance) -> Result<f64> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(domain(format!("lower incomplete gamma needs s > 0, got {s}")));
    }
    if !(x >= 0.0) {
        return Err(domain(format!("lower incomplete gamma needs x >= 0, got {x}")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x.is_infinite() {
        return Ok(gamma(s));
    }
    if x < s + 1.0 {
        lower_series(s, x, tol)
    } else {
        Ok((gamma(s) - upper_cf(s, x, tol)?).max(0.0))
    }
}

/// Upper incomplete gamma `Γ(s, x)` for any real `s` and `x > 0`.
///
/// # Example
/// ```
/// let v = m2m_agg::specfun::upper_incomplete_gamma(1.0, 2.0).unwrap();
/// assert!((v - (-2.0f64).exp()).abs() < 1e-12);
/// ```
pub fn upper_incomplete_gamma(s: f64, x: f64) -> Result<f64> {
    upper_incomplete_gamma_tol(s, x, Tolerance::default())
}

pub fn upper_incomplete_gamma_tol(s: f64, x: f64, tol: Tolerance) -> Result<f64> {
    if !s.is_finite() {
        return Err(domain(format!("upper incomplete gamma needs finite s, got {s}")));
    }
    if !(x > 0.0) {
        return Err(domain(format!("upper incomplete gamma needs x > 0, got {x}")));
    }
    if x.is_infinite() {
        return Ok(0.0);
    }
    if s > 1.0 {
        if x >= s + 1.0 {
            return upper_cf(s, x, tol);
        }
        return Ok((gamma(s) - lower_series(s, x, tol)?).max(0.0));
    }
    if x >= 1.0 {
        return upper_cf(s, x, tol);
    }
    // x < 1, s <= 1: shift s up into [0, 1], evaluate there, then recur down.
    let steps = if s < 0.0 { (-s).ceil() as usize } else { 0 };
    let s0 = s + steps as f64;
    let mut g = upper_small_x(s0, x, tol)?;
    let emx = (-x).exp();
    for j in (0..steps).rev() {
        let a = s + j as f64;
        g = (g - x.powf(a) * emx) / a;
    }
    Ok(g)
}

fn lower_series(s: f64, x: f64, tol: Tolerance) -> Result<f64> {
    let mut term = 1.0 / s;
    let mut sum = term;
    for n in 1..tol.max_terms {
        term *= x / (s + n as f64);
        sum += term;
        if term.abs() <= tol.stop() * sum.abs() {
            return Ok(sum * (s * x.ln() - x).exp());
        }
    }
    Err(Error::NoConvergence { what: "lower incomplete gamma series", terms: tol.max_terms })
}

// Modified Lentz evaluation of the Legendre continued fraction.
fn upper_cf(s: f64, x: f64, tol: Tolerance) -> Result<f64> {
    let mut b = x + 1.0 - s;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..tol.max_terms {
        let an = -(i as f64) * (i as f64 - s);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() <= tol.stop() {
            return Ok(h * (s * x.ln() - x).exp());
        }
    }
    Err(Error::NoConvergence { what: "upper incomplete gamma continued fraction", terms: tol.max_terms })
}

// Γ(s, x) for s in [0, 1], x < 1, written so that s -> 0 stays stable:
// Γ(s,x) = (Γ(1+s) - 1)/s - (x^s - 1)/s - x^s Σ_{n≥1} (-x)^n / (n! (s+n)).
fn upper_small_x(s: f64, x: f64, tol: Tolerance) -> Result<f64> {
    let g1 = if s.abs() < 1e-4 {
        -EULER_GAMMA + 0.989_055_995_327_972_6 * s - 0.907_479_076_080_376 * s * s
    } else {
        ln_gamma(1.0 + s).exp_m1() / s
    };
    let lx = x.ln();
    let h = if s == 0.0 { lx } else { (s * lx).exp_m1() / s };
    let mut t = 1.0;
    let mut sum = 0.0;
    let mut converged = false;
    for n in 1..tol.max_terms {
        t *= -x / n as f64;
        let term = t / (s + n as f64);
        sum += term;
        if term.abs() <= tol.stop() * sum.abs().max(1e-300) {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence { what: "upper incomplete gamma series", terms: tol.max_terms });
    }
    Ok(g1 - h - (s * lx).exp() * sum)
}

/// `C_α(t) = 2F1(1, 1-2/α; 2-2/α; -t)`.
///
/// # Example
/// ```
/// let v = m2m_agg::specfun::c_alpha(4.0, 1.0).unwrap();
/// assert!((v - std::f64::consts::FRAC_PI_4).abs() < 1e-12);
/// ```
pub fn c_alpha(alpha: f64, t: f64) -> Result<f64> {
    c_alpha_tol(alpha, t, Tolerance::default())
}

pub fn c_alpha_tol(alpha: f64, t: f64, tol: Tolerance) -> Result<f64> {
    check_alpha(alpha)?;
    if !(t >= 0.0) {
        return Err(domain(format!("C_alpha needs t >= 0, got {t}")));
    }
    unit_family(1.0 - 2.0 / alpha, t, tol)
}

/// `B_α(s) = 2F1(1, 2/α; 1+2/α; -1/s)`.
pub fn b_alpha(alpha: f64, s: f64) -> Result<f64> {
    b_alpha_tol(alpha, s, Tolerance::default())
}

pub fn b_alpha_tol(alpha: f64, s: f64, tol: Tolerance) -> Result<f64> {
    check_alpha(alpha)?;
    if !(s > 0.0) {
        return Err(domain(format!("B_alpha needs s > 0, got {s}")));
    }
    unit_family(2.0 / alpha, 1.0 / s, tol)
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 2.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("path loss exponent must exceed 2, got {alpha}")))
    }
}

// F(b, t) = 2F1(1, b; b+1; -t) = b ∫_0^1 u^{b-1} / (1 + t u) du, 0 < b < 1, t >= 0.
fn unit_family(b: f64, t: f64, tol: Tolerance) -> Result<f64> {
    if t == 0.0 {
        return Ok(1.0);
    }
    if t.is_infinite() {
        return Ok(0.0);
    }
    if t <= 0.5 {
        let mut p = 1.0;
        let mut sum = 1.0;
        for n in 1..tol.max_terms {
            p *= -t;
            let term = p * b / (b + n as f64);
            sum += term;
            if term.abs() <= tol.stop() * sum.abs() {
                return Ok(sum);
            }
        }
    } else if t < 3.0 {
        // Pfaff: (1+t)^{-1} 2F1(1, 1; b+1; t/(1+t)).
        let z = t / (1.0 + t);
        let mut term = 1.0;
        let mut sum = 1.0;
        for n in 0..tol.max_terms {
            let nf = n as f64;
            term *= (nf + 1.0) / (b + 1.0 + nf) * z;
            sum += term;
            if term.abs() <= tol.stop() * sum.abs() {
                return Ok(sum / (1.0 + t));
            }
        }
    } else {
        // Full-range Mellin integral minus the tail beyond u = 1.
        let reflected = PI / (PI * b).sin() * t.powf(-b);
        let mut p = 1.0 / t;
        let mut sum = 0.0;
        for n in 0..tol.max_terms {
            let term = p / (n as f64 + 1.0 - b);
            sum += term;
            if term.abs() <= tol.stop() * sum.abs() {
                return Ok(b * (reflected - sum));
            }
            p *= -1.0 / t;
        }
    }
    Err(Error::NoConvergence { what: "hypergeometric series", terms: tol.max_terms })
}
