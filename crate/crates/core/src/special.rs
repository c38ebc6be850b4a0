//! Complex log-gamma, digamma and the Hurwitz-type tails that make up the
//! logarithmic derivatives of the gamma factors.
//!
//! Everything here is evaluated by the same two-step scheme: shift the
//! argument with the recurrence until it sits in `Re w >= 0, |w| >= 20`, then
//! apply an asymptotic (Stirling or Euler–Maclaurin) series with Bernoulli
//! numbers up to `B_24`. In that region the truncation error is far below
//! double precision.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{AfeError, Result};
use crate::sum::CompensatedSum;

/// Euler's constant, 30 significant digits.
#[allow(clippy::excessive_precision)]
pub const EULER_GAMMA: f64 = 0.577215664901532860606512090082;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// `B_2, B_4, ..., B_24`.
#[allow(clippy::excessive_precision)]
const BERNOULLI_EVEN: [f64; 12] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
];

const ASYMPTOTIC_RADIUS: f64 = 20.0;

/// A point `s = sigma + i t` of the complex plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexPoint {
    pub sigma: f64,
    pub t: f64,
}

impl ComplexPoint {
    pub fn new(sigma: f64, t: f64) -> Self {
        Self { sigma, t }
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.sigma, self.t)
    }

    pub fn is_finite(self) -> bool {
        self.sigma.is_finite() && self.t.is_finite()
    }

    /// `sgn(t)`; undefined on the real axis.
    pub fn sgn_t(self) -> Result<f64> {
        sgn(self.t)
    }
}

impl From<Complex64> for ComplexPoint {
    fn from(z: Complex64) -> Self {
        Self::new(z.re, z.im)
    }
}

pub(crate) fn sgn(t: f64) -> Result<f64> {
    if t > 0.0 {
        Ok(1.0)
    } else if t < 0.0 {
        Ok(-1.0)
    } else {
        Err(AfeError::Domain("sgn(t) is undefined for t = 0".into()))
    }
}

/// Returns `Some(n)` when `z` lies within `tol` of the nonpositive integer `-n`.
pub(crate) fn near_nonpositive_integer(z: Complex64, tol: f64) -> Option<u64> {
    if z.re > tol {
        return None;
    }
    let n = (-z.re).round();
    if n >= 0.0 && (z + n).norm() < tol {
        Some(n as u64)
    } else {
        None
    }
}

/// Number of recurrence steps needed to move `z` into the asymptotic region.
fn shift_count(z: Complex64) -> usize {
    let mut n = if z.re < 0.0 { (-z.re).ceil() } else { 0.0 };
    if z.im.abs() < ASYMPTOTIC_RADIUS {
        let need = (ASYMPTOTIC_RADIUS * ASYMPTOTIC_RADIUS - z.im * z.im).sqrt();
        n = n.max((need - z.re).ceil());
    }
    n.max(0.0) as usize
}

/// Principal branch of `log Γ(z)`, analytic off the nonpositive real axis.
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(AfeError::Domain(format!("log_gamma of non-finite {z}")));
    }
    if let Some(n) = near_nonpositive_integer(z, 1e-12) {
        return Err(AfeError::Pole(format!("Γ has a pole at z = -{n}")));
    }
    let shift = shift_count(z);
    let mut logs = CompensatedSum::new();
    for k in 0..shift {
        logs.add((z + k as f64).ln());
    }
    let w = z + shift as f64;
    Ok(stirling(w) - logs.value())
}

fn stirling(w: Complex64) -> Complex64 {
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut pow = inv;
    let mut series = Complex64::new(0.0, 0.0);
    for (k, b) in BERNOULLI_EVEN.iter().enumerate() {
        let two_k = 2.0 * (k as f64 + 1.0);
        series += pow * (b / (two_k * (two_k - 1.0)));
        pow *= inv2;
    }
    (w - 0.5) * w.ln() - w + LN_SQRT_2PI + series
}

/// Digamma `ψ(z) = Γ'/Γ(z)`.
pub fn digamma(z: Complex64) -> Result<Complex64> {
    if let Some(n) = near_nonpositive_integer(z, 1e-12) {
        return Err(AfeError::Pole(format!("ψ has a pole at z = -{n}")));
    }
    let shift = shift_count(z);
    let mut recips = CompensatedSum::new();
    for k in 0..shift {
        recips.add((z + k as f64).inv());
    }
    let w = z + shift as f64;
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut pow = inv2;
    let mut series = Complex64::new(0.0, 0.0);
    for (k, b) in BERNOULLI_EVEN.iter().enumerate() {
        series += pow * (b / (2.0 * (k as f64 + 1.0)));
        pow *= inv2;
    }
    Ok(w.ln() - 0.5 * inv - series - recips.value())
}

/// `∑_{n≥0} (z+n)^{-l}` for integer `l >= 2` (the Hurwitz zeta `ζ(l, z)`).
pub fn hurwitz_sum(z: Complex64, l: u32) -> Result<Complex64> {
    if l < 2 {
        return Err(AfeError::Argument(format!("hurwitz_sum needs l >= 2, got {l}")));
    }
    if let Some(n) = near_nonpositive_integer(z, 1e-12) {
        return Err(AfeError::Pole(format!("(z+n)^-{l} is singular at z = -{n}")));
    }
    let li = l as i32;
    let shift = shift_count(z);
    let mut acc = CompensatedSum::new();
    for k in 0..shift {
        acc.add((z + k as f64).powi(-li));
    }
    let w = z + shift as f64;
    let inv = w.inv();
    let inv2 = inv * inv;
    let w_pow = w.powi(-li);
    // Euler–Maclaurin for the tail starting at w.
    let mut tail = w_pow * w / (l as f64 - 1.0) + w_pow * 0.5;
    let lf = l as f64;
    let mut rising = lf; // (l)_{2k-1}
    let mut fact = 2.0; // (2k)!
    let mut pow = w_pow * inv; // w^{-l-2k+1}
    for (k, b) in BERNOULLI_EVEN.iter().enumerate() {
        tail += pow * (b * rising / fact);
        let k1 = k as f64 + 1.0;
        rising *= (lf + 2.0 * k1 - 1.0) * (lf + 2.0 * k1);
        fact *= (2.0 * k1 + 1.0) * (2.0 * k1 + 2.0);
        pow *= inv2;
    }
    acc.add(tail);
    Ok(acc.value())
}

/// The region `D = {Re z < delta, |Im z| < 1}` excluded by the tail
/// estimates. `delta = 0` is the default.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExcludedRegion {
    pub delta: f64,
}

impl Default for ExcludedRegion {
    fn default() -> Self {
        Self { delta: 0.0 }
    }
}

impl ExcludedRegion {
    pub fn new(delta: f64) -> Result<Self> {
        if !(delta >= 0.0) {
            return Err(AfeError::Argument(format!("delta must be >= 0, got {delta}")));
        }
        Ok(Self { delta })
    }

    pub fn contains(&self, z: Complex64) -> bool {
        z.re < self.delta && z.im.abs() < 1.0
    }

    fn check(&self, s: Complex64) -> Result<()> {
        if self.contains(s) {
            Err(AfeError::Domain(format!(
                "s = {s} lies in the excluded region Re s < {}, |Im s| < 1",
                self.delta
            )))
        } else {
            Ok(())
        }
    }
}

/// `∑_{n≥1} (s+n)^{-l}`, `l >= 2`, outside the default excluded region.
pub fn haff_sum_l(s: Complex64, l: u32) -> Result<Complex64> {
    haff_sum_l_in(s, l, ExcludedRegion::default())
}

pub fn haff_sum_l_in(s: Complex64, l: u32, region: ExcludedRegion) -> Result<Complex64> {
    if l < 2 {
        return Err(AfeError::Argument(format!("haff_sum_l needs l >= 2, got {l}")));
    }
    region.check(s)?;
    hurwitz_sum(s + 1.0, l)
}

/// `∑_{n≥1} (1/(s+n) - 1/n) = -γ - ψ(s+1)`.
pub fn haff_sum_1(s: Complex64) -> Result<Complex64> {
    haff_sum_1_in(s, ExcludedRegion::default())
}

pub fn haff_sum_1_in(s: Complex64, region: ExcludedRegion) -> Result<Complex64> {
    region.check(s)?;
    Ok(-EULER_GAMMA - digamma(s + 1.0)?)
}

/// The ratio `Γ(λ(1-s)+conj μ) / Γ(λs+μ)` evaluated two ways.
#[derive(Debug, Clone, Copy)]
pub struct GammaRatio {
    /// Exact value through `log_gamma`.
    pub exact: Complex64,
    /// Leading Stirling form `(λ|t|)^{λ(1-2σ)} e^{iθ(t)}`.
    pub leading: Complex64,
}

impl GammaRatio {
    pub fn relative_gap(&self) -> f64 {
        (self.exact / self.leading - 1.0).norm()
    }

    pub fn modulus_gap(&self) -> f64 {
        (self.exact.norm() / self.leading.norm() - 1.0).abs()
    }
}

/// Phase `θ(t) = 2λt - 2(λt + Im μ) log(λ|t|) + sgn(t)(1 - λ - 2 Re μ)π/2`
/// of the leading form of the gamma ratio.
pub fn gamma_ratio_phase(lambda: f64, mu: Complex64, t: f64) -> Result<f64> {
    let sg = sgn(t)?;
    let log_lt = (lambda * t.abs()).ln();
    Ok(2.0 * lambda * t - 2.0 * (lambda * t + mu.im) * log_lt
        + sg * (1.0 - lambda - 2.0 * mu.re) * PI / 2.0)
}

pub fn gamma_ratio_asymptotic(lambda: f64, mu: Complex64, s: Complex64) -> Result<GammaRatio> {
    if !(lambda > 0.0) {
        return Err(AfeError::Argument(format!("lambda must be positive, got {lambda}")));
    }
    if s.im.abs() < 2.0 {
        return Err(AfeError::Domain(format!("|t| >= 2 required, got t = {}", s.im)));
    }
    let num = lambda * (1.0 - s) + mu.conj();
    let den = lambda * s + mu;
    if let Some(n) = near_nonpositive_integer(num, 1e-9) {
        return Err(AfeError::Pole(format!("numerator Γ pole at -{n}")));
    }
    if let Some(n) = near_nonpositive_integer(den, 1e-9) {
        return Err(AfeError::Pole(format!("denominator Γ pole at -{n}")));
    }
    let exact = (log_gamma(num)? - log_gamma(den)?).exp();
    let modulus = (lambda * s.im.abs()).powf(lambda * (1.0 - 2.0 * s.re));
    let phase = gamma_ratio_phase(lambda, mu, s.im)?;
    Ok(GammaRatio { exact, leading: Complex64::from_polar(modulus, phase) })
}
