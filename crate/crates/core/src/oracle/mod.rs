//! Reference values for `F^{(m)}(s)` computed without the approximate
//! functional equation, plus the residual harness built on them.
//!
//! Nothing here calls the summation code in [`crate::afe`] or
//! [`crate::sum`]; the two sides only meet in [`report`].

pub mod report;

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::datum::{CoefficientKind, SelbergDatum};
use crate::error::{AfeError, Result};

pub use report::{calibrate, fit_slope, residual_suite, scan, Report, ReportRow, ScanRow, SuiteConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMethod {
    DirectSeries,
    EulerMaclaurinZeta,
    CauchyCircle,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    pub method: OracleMethod,
    pub target_abs_tol: f64,
    pub max_terms: usize,
    pub circle_radius: f64,
}

impl OracleConfig {
    pub fn new(method: OracleMethod) -> Self {
        Self { method, target_abs_tol: 1e-11, max_terms: 1 << 24, circle_radius: 0.25 }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.target_abs_tol = tol;
        self
    }

    pub fn with_radius(mut self, r: f64) -> Self {
        self.circle_radius = r;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.target_abs_tol >= 1e-13) {
            return Err(AfeError::Argument(format!("target_abs_tol must be >= 1e-13, got {}", self.target_abs_tol)));
        }
        if !(self.circle_radius > 0.0 && self.circle_radius.is_finite()) {
            return Err(AfeError::Argument(format!("circle_radius must be positive, got {}", self.circle_radius)));
        }
        if self.max_terms == 0 {
            return Err(AfeError::Argument("max_terms must be positive".into()));
        }
        Ok(())
    }
}

/// `B_{2k}` for `k = 1..=9`.
const BERNOULLI: [f64; 9] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
];

/// Bernoulli corrections kept in the Euler–Maclaurin tail.
const EM_TERMS: usize = 8;

fn binom(m: usize, i: usize) -> f64 {
    (0..i).fold(1.0, |acc, k| acc * (m - k) as f64 / (k + 1) as f64)
}

fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// `(-log x)^k x^{-s}`.
fn log_power(x: f64, s: Complex64, k: usize) -> Complex64 {
    let l = x.ln();
    Complex64::from_polar((-s.re * l).exp(), -s.im * l) * (-l).powi(k as i32)
}

/// Coefficients (ascending) of `s (s+1) ... (s+n-1)`.
fn rising_poly(n: usize) -> Vec<f64> {
    let mut p = vec![1.0];
    for i in 0..n {
        let mut q = vec![0.0; p.len() + 1];
        for (k, c) in p.iter().enumerate() {
            q[k + 1] += c;
            q[k] += c * i as f64;
        }
        p = q;
    }
    p
}

/// The `i`-th derivative of the polynomial `p` at `s`.
fn poly_derivative(p: &[f64], i: usize, s: Complex64) -> Complex64 {
    let mut out = Complex64::new(0.0, 0.0);
    let mut pow = Complex64::new(1.0, 0.0);
    for (k, c) in p.iter().enumerate().skip(i) {
        let falling = ((k - i + 1)..=k).fold(1.0, |a, j| a * j as f64);
        out += c * falling * pow;
        pow *= s;
    }
    out
}

/// `d^m/ds^m` of the `k`-th Bernoulli correction
/// `B_{2k}/(2k)! s(s+1)...(s+2k-2) N^{-s-2k+1}`.
fn em_correction(k: usize, s: Complex64, n: f64, m: usize) -> Complex64 {
    let p = rising_poly(2 * k - 1);
    let coeff = BERNOULLI[k - 1] / factorial(2 * k);
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..=m.min(2 * k - 1) {
        acc += binom(m, i) * poly_derivative(&p, i, s) * log_power(n, s + (2 * k - 1) as f64, m - i);
    }
    coeff * acc
}

fn em_at(s: Complex64, m: usize, n: usize) -> (Complex64, f64) {
    // head, summed from the small end
    let mut sum = Complex64::new(0.0, 0.0);
    let mut comp = Complex64::new(0.0, 0.0);
    for k in (1..n).rev() {
        let y = log_power(k as f64, s, m) - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    let nf = n as f64;
    let s1 = s - 1.0;
    let mut integral = Complex64::new(0.0, 0.0);
    for i in 0..=m {
        let d = if i % 2 == 0 { 1.0 } else { -1.0 } * factorial(i) / s1.powu(i as u32 + 1);
        integral += binom(m, i) * log_power(nf, s - 1.0, m - i) * d;
    }
    let mut total = sum + integral + 0.5 * log_power(nf, s, m);
    for k in 1..=EM_TERMS {
        total += em_correction(k, s, nf, m);
    }
    (total, em_correction(EM_TERMS + 1, s, nf, m).norm())
}

/// `ζ^{(m)}(s)` from the differentiated Euler–Maclaurin formula.
pub fn euler_maclaurin_zeta(s: Complex64, m: u32, cfg: &OracleConfig) -> Result<Complex64> {
    cfg.validate()?;
    if (s - 1.0).norm() < 1e-12 {
        return Err(AfeError::Domain("zeta has a pole at s = 1".into()));
    }
    if m > 6 {
        return Err(AfeError::Capacity(format!("m = {m} exceeds 6")));
    }
    let mut n = 20usize.max((2.0 * s.im.abs()).ceil() as usize).max((s.norm()).ceil() as usize);
    loop {
        let (v, err) = em_at(s, m as usize, n);
        if err <= cfg.target_abs_tol {
            return Ok(v);
        }
        if 2 * n > cfg.max_terms {
            return Err(AfeError::Accuracy { estimate: err, target: cfg.target_abs_tol });
        }
        n *= 2;
    }
}

/// `∫_a^∞ (-log x)^m x^{-s} dx` for `Re s > 1`.
fn power_log_integral(a: f64, s: Complex64, m: usize) -> Complex64 {
    let s1 = s - 1.0;
    let x = s1 * a.ln();
    let mut poly = Complex64::new(0.0, 0.0);
    let mut term = Complex64::new(1.0, 0.0);
    for k in 0..=m {
        if k > 0 {
            term *= x / k as f64;
        }
        poly += term;
    }
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    sign * factorial(m) / s1.powu(m as u32 + 1) * (-x).exp() * poly
}

/// Termwise-differentiated Dirichlet series for `σ >= 1.1`, truncated where
/// the integral-comparison tail bound meets the tolerance.
pub fn direct_series(datum: &SelbergDatum, s: Complex64, m: u32, cfg: &OracleConfig) -> Result<Complex64> {
    cfg.validate()?;
    if !(s.re >= 1.1) {
        return Err(AfeError::Domain(format!("direct series needs sigma >= 1.1, got {}", s.re)));
    }
    let m = m as usize;
    let source = datum.coefficient_source();
    let zeta_like = source.kind() == CoefficientKind::Zeta;
    let (c, e) = source.growth_bound();
    let alpha = s.re - e;
    if !(alpha > 1.0) {
        return Err(AfeError::Capacity(format!(
            "coefficient growth n^{e} leaves no convergence margin at sigma = {}",
            s.re
        )));
    }
    // the tail estimate needs x^{-α} log^m x decreasing past N
    let floor = ((m as f64 / alpha).exp().ceil() as usize).max(1000);
    let tail = |n: usize| -> f64 {
        let nf = n as f64;
        if zeta_like {
            let a = nf + 0.5;
            // |f'(a)| for f(x) = x^{-s} log^m x
            let l = a.ln();
            let deriv = a.powf(-s.re - 1.0) * l.powi(m as i32 - 1).abs() * (s.norm() * l + m as f64);
            deriv / 12.0
        } else {
            let x = (alpha - 1.0) * nf.ln();
            let mut poly = 0.0;
            let mut term = 1.0;
            for k in 0..=m {
                if k > 0 {
                    term *= x / k as f64;
                }
                poly += term;
            }
            c * factorial(m) / (alpha - 1.0).powi(m as i32 + 1) * (-x).exp() * poly
        }
    };
    let mut n = floor;
    while tail(n) > cfg.target_abs_tol {
        if 2 * n > cfg.max_terms {
            return Err(AfeError::Capacity(format!(
                "tail bound {:e} above {:e} with {} terms",
                tail(n),
                cfg.target_abs_tol,
                n
            )));
        }
        n *= 2;
    }
    let mut a = datum.coefficients(n)?;
    if a.len() < n {
        a.resize(n, Complex64::new(0.0, 0.0));
    }
    let mut sum = Complex64::new(0.0, 0.0);
    let mut comp = Complex64::new(0.0, 0.0);
    for k in (1..=n).rev() {
        let y = a[k - 1] * log_power(k as f64, s, m) - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    if zeta_like {
        sum += power_log_integral(n as f64 + 0.5, s, m);
    }
    Ok(sum)
}

/// `f^{(m)}(s)` from `m!/(2πi) ∮ f(z)/(z-s)^{m+1} dz` on a circle, with
/// `64(m+1)` equispaced nodes and one doubling for the error estimate.
pub fn cauchy_circle<F>(mut f: F, s: Complex64, m: u32, cfg: &OracleConfig) -> Result<Complex64>
where
    F: FnMut(Complex64) -> Result<Complex64>,
{
    cfg.validate()?;
    let r = cfg.circle_radius;
    let base = 64 * (m as usize + 1);
    let mut at = |n: usize| -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..n {
            let th = 2.0 * PI * k as f64 / n as f64;
            let e = Complex64::from_polar(1.0, th);
            acc += f(s + r * e)? * Complex64::from_polar(1.0, -(m as f64) * th);
        }
        Ok(acc * factorial(m as usize) / (n as f64 * r.powi(m as i32)))
    };
    let coarse = at(base)?;
    let fine = at(2 * base)?;
    let estimate = (fine - coarse).norm();
    if estimate > cfg.target_abs_tol {
        return Err(AfeError::Accuracy { estimate, target: cfg.target_abs_tol });
    }
    Ok(fine)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn em() -> OracleConfig {
        OracleConfig::new(OracleMethod::EulerMaclaurinZeta)
    }

    #[test]
    fn zeta_two() {
        let v = euler_maclaurin_zeta(c(2.0, 0.0), 0, &em()).unwrap();
        assert!((v - PI * PI / 6.0).norm() < 1e-12);
        let d = direct_series(&SelbergDatum::zeta(), c(2.0, 0.0), 0, &OracleConfig::new(OracleMethod::DirectSeries).with_tol(1e-11)).unwrap();
        assert!((d - PI * PI / 6.0).norm() < 1e-10);
    }

    #[test]
    fn zeta_prime_two() {
        let d = direct_series(&SelbergDatum::zeta(), c(2.0, 0.0), 1, &OracleConfig::new(OracleMethod::DirectSeries)).unwrap();
        assert!((d.re + 0.937_548_254_315_843_8).abs() < 1e-9, "{d}");
        let v = euler_maclaurin_zeta(c(2.0, 0.0), 1, &em()).unwrap();
        assert!((v.re + 0.937_548_254_315_843_8).abs() < 1e-11, "{v}");
    }

    #[test]
    fn first_zero() {
        let v = euler_maclaurin_zeta(c(0.5, 14.134_725_141_734_693), 0, &em()).unwrap();
        assert!(v.norm() < 1e-9);
    }

    #[test]
    fn known_strip_value() {
        // ζ(1/2 + 10i), mpmath
        let v = euler_maclaurin_zeta(c(0.5, 10.0), 0, &em()).unwrap();
        assert!((v - c(1.544_895_220_296_752_8, -0.115_336_465_271_273_4)).norm() < 1e-12, "{v}");
    }

    #[test]
    fn cauchy_exp_and_polynomials() {
        let cfg = OracleConfig::new(OracleMethod::CauchyCircle).with_radius(1.0);
        let v = cauchy_circle(|z| Ok(z.exp()), c(0.0, 0.0), 3, &cfg).unwrap();
        assert!((v - 1.0).norm() < 1e-12);
        let v = cauchy_circle(|z| Ok(z * z), c(0.3, 2.0), 3, &cfg).unwrap();
        assert!(v.norm() < 1e-12);
    }

    #[test]
    fn em_derivative_matches_cauchy() {
        let s = c(0.5, 30.0);
        let d = euler_maclaurin_zeta(s, 1, &em()).unwrap();
        let cfg = OracleConfig::new(OracleMethod::CauchyCircle).with_tol(1e-9);
        let v = cauchy_circle(|z| euler_maclaurin_zeta(z, 0, &em().with_tol(1e-13)), s, 1, &cfg).unwrap();
        assert!((d - v).norm() < 1e-8, "{d} {v}");
    }

    #[test]
    fn domain_checks() {
        assert!(matches!(euler_maclaurin_zeta(c(1.0, 0.0), 0, &em()), Err(AfeError::Domain(_))));
        let cfg = OracleConfig::new(OracleMethod::DirectSeries);
        assert!(matches!(direct_series(&SelbergDatum::zeta(), c(1.05, 3.0), 0, &cfg), Err(AfeError::Domain(_))));
        assert!(matches!(direct_series(&SelbergDatum::delta(), c(1.2, 3.0), 0, &cfg), Err(AfeError::Capacity(_))));
        assert!(em().with_tol(1e-15).validate().is_err());
    }
}
