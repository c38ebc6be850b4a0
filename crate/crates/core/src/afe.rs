//! Sharp and smoothed approximate functional equations for `F^{(m)}(s)`,
//! the contour coefficients `γ_j^{(r)}`, `δ_j^{(r)}`, the polynomial
//! regularizer `g_F` and the reflection identity for derivatives.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::calibration::Calibration;
use crate::chi::{chi_derivatives, chi_log_ratios};
use crate::contour::{ContourSpec, POLE_MARGIN};
use crate::datum::SelbergDatum;
use crate::error::{AfeError, Result};
use crate::smoothing::SmoothingFunction;
use crate::special::{log_gamma, sgn};
use crate::sum::CompensatedSum;

/// Largest derivative order accepted by the engine.
pub const M_MAX: u32 = 6;
/// Largest smoothing order `l`.
pub const L_MAX: usize = 12;

/// Which of the two coefficient families to integrate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    /// `γ`: built from `g_F` and the `μ_j`.
    Gamma,
    /// `δ`: built from `ḡ_F` and the conjugated `μ_j`.
    Delta,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AfeMode {
    Sharp,
    Smoothed,
}

impl AfeMode {
    pub fn name(self) -> &'static str {
        match self {
            AfeMode::Sharp => "sharp",
            AfeMode::Smoothed => "smoothed",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AfeOptions {
    /// `k` in `y_1 = k y_0`, `y_2 = y_0 / k`.
    pub y_split: f64,
    pub calibration: Calibration,
    /// Multiplies every `χ_F` factor; a fault-injection hook for the
    /// verification suite.
    #[doc(hidden)]
    pub chi_scale: f64,
}

impl Default for AfeOptions {
    fn default() -> Self {
        Self { y_split: 1.0, calibration: Calibration::embedded(), chi_scale: 1.0 }
    }
}

impl AfeOptions {
    pub fn with_split(mut self, k: f64) -> Self {
        self.y_split = k;
        self
    }
}

/// One of the largest terms of a main sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TermDiagnostic {
    /// 1 for the `n^{-s}` sum, 2 for the `n^{-(1-s)}` sums.
    pub sum: u8,
    pub n: usize,
    pub magnitude: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AfeResult {
    pub value: Complex64,
    pub main_sum_1: Complex64,
    pub main_sum_2: Complex64,
    /// The `j >= 1` contour terms (smoothed mode).
    pub correction: Complex64,
    pub error_estimate: f64,
    /// Contour-quadrature part of `error_estimate`.
    pub quadrature_error: f64,
    pub cutoffs: (f64, f64),
    pub mode: AfeMode,
    pub diagnostics: Vec<TermDiagnostic>,
}

/// `y_0 = √C_F |t|^{d_F/2}`.
pub fn balanced_cutoff(datum: &SelbergDatum, t: f64) -> f64 {
    let k = datum.derived();
    (0.5 * (k.c_f.ln() + k.d_f * t.abs().ln())).exp()
}

/// `(y_1, y_2) = (k y_0, y_0 / k)`.
pub fn cutoffs(datum: &SelbergDatum, t: f64, k: f64) -> Result<(f64, f64)> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(AfeError::Argument(format!("y_split must be positive, got {k}")));
    }
    let y0 = balanced_cutoff(datum, t);
    Ok((k * y0, y0 / k))
}

/// `a z + b` raised to `power`.
#[derive(Debug, Clone, Copy)]
struct LinearFactor {
    a: f64,
    b: Complex64,
    power: u32,
}

impl LinearFactor {
    fn at(&self, z: Complex64) -> Complex64 {
        self.a * z + self.b
    }
}

fn regularizer_factors(datum: &SelbergDatum, m: u32) -> Vec<LinearFactor> {
    let p = datum.pole_order() + m;
    let mut out = vec![
        LinearFactor { a: 1.0, b: Complex64::new(0.0, 0.0), power: p },
        LinearFactor { a: -1.0, b: Complex64::new(1.0, 0.0), power: p },
    ];
    let nu = datum.derived().nu;
    for ((&lambda, &mu), &nu) in datum.lambdas().iter().zip(datum.mus()).zip(&nu) {
        if mu.re > lambda / 2.0 {
            continue;
        }
        for n in 0..=nu {
            let n = n as f64;
            out.push(LinearFactor { a: lambda, b: mu - n, power: m + 1 });
            out.push(LinearFactor { a: -lambda, b: lambda + mu.conj() - n, power: m + 1 });
        }
    }
    out.retain(|f| f.power > 0);
    out
}

/// `g_F(s) = (s(1-s))^{p_F+m} ∏ (A_j(s) Ā_j(1-s))^{m+1}`.
pub fn g_regularizer(datum: &SelbergDatum, s: Complex64, m: u32) -> Complex64 {
    regularizer_factors(datum, m)
        .iter()
        .map(|f| f.at(s).powu(f.power))
        .product()
}

/// `ρ = 1 / ((∏ λ_j^{λ_j})^{2/d_F} |t|)`, returned as `log ρ`.
fn log_rho(datum: &SelbergDatum, t: f64) -> f64 {
    let d_f = datum.derived().d_f;
    let log_prod: f64 = datum.lambdas().iter().map(|l| l * l.ln()).sum();
    -2.0 / d_f * log_prod - t.abs().ln()
}

/// `γ_j^{(r)}(s; ρ)` or `δ_j^{(r)}(s; ρ)` for all `j <= j_max`, `r <= r_max`.
#[derive(Debug, Clone)]
pub struct ContourCoefficients {
    /// `values[j][r]`.
    pub values: Vec<Vec<Complex64>>,
    /// Largest change under node doubling.
    pub quadrature_error: f64,
    pub contour: ContourSpec,
}

impl ContourCoefficients {
    pub fn get(&self, j: usize, r: usize) -> Complex64 {
        self.values[j][r]
    }
}

struct Integrand<'a> {
    datum: &'a SelbergDatum,
    shape: SelbergDatum,
    s: Complex64,
    factors: Vec<LinearFactor>,
    base_log_gamma: Vec<Complex64>,
    exponent: Complex64,
    j_max: usize,
    r_max: usize,
}

impl<'a> Integrand<'a> {
    fn new(datum: &'a SelbergDatum, s: Complex64, m: u32, j_max: usize, r_max: usize, variant: Variant) -> Result<Self> {
        let shape = match variant {
            Variant::Gamma => datum.clone(),
            Variant::Delta => datum.conjugate(),
        };
        let factors = regularizer_factors(&shape, m);
        let base_log_gamma = shape
            .lambdas()
            .iter()
            .zip(shape.mus())
            .map(|(l, mu)| log_gamma(*l * s + mu))
            .collect::<Result<Vec<_>>>()?;
        let d_f = datum.derived().d_f;
        let phase = Complex64::new(log_rho(datum, s.im), -PI * sgn(s.im)? / 2.0);
        Ok(Self {
            datum,
            shape,
            s,
            factors,
            base_log_gamma,
            exponent: phase * (d_f / 2.0),
            j_max,
            r_max,
        })
    }

    /// Adds `c f(w)` into `acc[j][r]`.
    fn accumulate(&self, w: Complex64, c: Complex64, acc: &mut [Vec<CompensatedSum>]) -> Result<()> {
        let z = self.s + w;
        let mut log_part = self.exponent * w;
        for ((l, mu), base) in self.shape.lambdas().iter().zip(self.shape.mus()).zip(&self.base_log_gamma) {
            log_part += log_gamma(*l * z + mu)? - base;
        }
        let mut g_ratio = Complex64::new(1.0, 0.0);
        for f in &self.factors {
            g_ratio *= (f.at(z) / f.at(self.s)).powu(f.power);
        }
        let base = c * g_ratio * log_part.exp();
        let chis = chi_log_ratios(self.datum, 1.0 - z, self.r_max)?;
        let mut inv = w.inv();
        for (j, row) in acc.iter_mut().enumerate().take(self.j_max + 1) {
            if j > 0 {
                inv /= w + j as f64;
            }
            let bj = base * inv;
            for (cell, chi) in row.iter_mut().zip(&chis) {
                cell.add(bj * chi);
            }
        }
        Ok(())
    }

    fn integrate(&self, spec: &ContourSpec, refine: usize) -> Result<Vec<Vec<Complex64>>> {
        let mut acc = vec![vec![CompensatedSum::new(); self.r_max + 1]; self.j_max + 1];
        for (w, c) in spec.nodes(refine) {
            self.accumulate(w, c, &mut acc)?;
        }
        let two_pi_i = Complex64::new(0.0, 2.0 * PI);
        Ok(acc
            .into_iter()
            .map(|row| row.into_iter().map(|v| v.value() / two_pi_i).collect())
            .collect())
    }
}

fn check_contour_poles(datum: &SelbergDatum, shape: &SelbergDatum, s: Complex64, spec: &ContourSpec) -> Result<()> {
    let reach = spec.radius + spec.right_center().abs() + spec.left_center().abs() + 2.0;
    let check = |p: Complex64, what: &str| -> Result<()> {
        if spec.encloses_or_near(p, POLE_MARGIN) {
            Err(AfeError::ContourDegeneracy(format!(
                "{what} pole at w = {p} meets the contour for s = {s}; use a larger |t|"
            )))
        } else {
            Ok(())
        }
    };
    for (&l, &mu) in shape.lambdas().iter().zip(shape.mus()) {
        for n in 0..=((reach * l).ceil() as usize) {
            check(-s - (mu + n as f64) / l, "gamma-factor")?;
        }
    }
    for (&l, &mu) in datum.lambdas().iter().zip(datum.mus()) {
        for n in 0..=((reach * l).ceil() as usize) {
            check(1.0 - s + (mu + n as f64) / l, "chi-ratio")?;
            check(-s - (mu.conj() + n as f64) / l, "chi-ratio")?;
        }
    }
    Ok(())
}

/// Integrates the coefficient family over the stadium contour for
/// `s` with `|t| >= 10`, with the regularizer of derivative order `m`.
pub fn contour_coefficients(
    datum: &SelbergDatum,
    s: Complex64,
    m: u32,
    j_max: usize,
    r_max: usize,
    variant: Variant,
) -> Result<ContourCoefficients> {
    if !(s.im.abs() >= 10.0) {
        return Err(AfeError::Domain(format!("contour coefficients need |t| >= 10, got t = {}", s.im)));
    }
    if j_max > L_MAX {
        return Err(AfeError::Capacity(format!("j = {j_max} exceeds {L_MAX}")));
    }
    let spec = ContourSpec::new(s.re, s.im)?;
    let integrand = Integrand::new(datum, s, m, j_max, r_max, variant)?;
    check_contour_poles(datum, &integrand.shape, s, &spec)?;
    let coarse = integrand.integrate(&spec, 1)?;
    let fine = integrand.integrate(&spec, 2)?;
    let quadrature_error = coarse
        .iter()
        .flatten()
        .zip(fine.iter().flatten())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    Ok(ContourCoefficients { values: fine, quadrature_error, contour: spec })
}

/// A single `γ_j^{(r)}(s; ρ)` / `δ_j^{(r)}(s; ρ)` with regularizer order `m`.
pub fn gamma_delta_coeff(
    datum: &SelbergDatum,
    s: Complex64,
    j: usize,
    r: usize,
    variant: Variant,
    m: u32,
) -> Result<Complex64> {
    Ok(contour_coefficients(datum, s, m, j, r, variant)?.values[j][r])
}

/// The same coefficient as a sum of residues at the poles `w = -k` that the
/// contour encloses.
pub fn gamma_delta_residues(
    datum: &SelbergDatum,
    s: Complex64,
    j: usize,
    r: usize,
    variant: Variant,
    m: u32,
) -> Result<Complex64> {
    let spec = ContourSpec::new(s.re, s.im)?;
    let integrand = Integrand::new(datum, s, m, j, r, variant)?;
    let mut total = CompensatedSum::new();
    for k in 0..=j {
        if -(k as f64) <= spec.left_crossing() {
            break;
        }
        let w = Complex64::new(-(k as f64), 0.0);
        let z = s + w;
        let mut log_part = integrand.exponent * w;
        for ((l, mu), base) in integrand.shape.lambdas().iter().zip(integrand.shape.mus()).zip(&integrand.base_log_gamma) {
            log_part += log_gamma(*l * z + mu)? - base;
        }
        let mut g_ratio = Complex64::new(1.0, 0.0);
        for f in &integrand.factors {
            g_ratio *= (f.at(z) / f.at(s)).powu(f.power);
        }
        // ∏_{i≠k} (i - k) = (-1)^k k! (j-k)!
        let mut denom = if k % 2 == 0 { 1.0 } else { -1.0 };
        for i in 1..=k {
            denom *= i as f64;
        }
        for i in 1..=(j - k) {
            denom *= i as f64;
        }
        let chi = chi_log_ratios(datum, 1.0 - z, r)?[r];
        total.add(g_ratio * log_part.exp() * chi / denom);
    }
    Ok(total.value())
}

fn check_strip(s: Complex64, m: u32) -> Result<()> {
    if !(0.0..=1.0).contains(&s.re) {
        return Err(AfeError::Domain(format!("sigma outside [0,1]: sigma = {}", s.re)));
    }
    if !(s.im.abs() >= 10.0) {
        return Err(AfeError::Domain(format!("|t| must be at least 10, got t = {}", s.im)));
    }
    if m > M_MAX {
        return Err(AfeError::Capacity(format!("derivative order m = {m} exceeds {M_MAX}")));
    }
    Ok(())
}

fn binomial(m: u32, r: u32) -> f64 {
    (0..r).fold(1.0, |acc, i| acc * (m - i) as f64 / (i + 1) as f64)
}

/// Sums `∑_{n<=N} a(n) (-log n)^r n^{-s} w(n)` for `r = 0..=r_max`,
/// in ascending `n` with compensation; also returns the largest terms.
fn dirichlet_sums(
    a: &[Complex64],
    s: Complex64,
    r_max: usize,
    n_max: usize,
    mut weight: impl FnMut(usize) -> Result<Complex64>,
) -> Result<(Vec<Complex64>, Vec<(usize, f64)>)> {
    let mut acc = vec![CompensatedSum::new(); r_max + 1];
    let mut largest: Vec<(usize, f64)> = Vec::new();
    for (idx, an) in a.iter().enumerate().take(n_max) {
        let n = idx + 1;
        let w = weight(n)?;
        if w == Complex64::new(0.0, 0.0) || *an == Complex64::new(0.0, 0.0) {
            continue;
        }
        let ln = (n as f64).ln();
        let term = an * Complex64::from_polar((-s.re * ln).exp(), -s.im * ln) * w;
        let mut pow = 1.0;
        for cell in acc.iter_mut() {
            cell.add(term * pow);
            pow *= -ln;
        }
        largest.push((n, (term * (-ln).powi(r_max as i32)).norm()));
    }
    largest.sort_by(|x, y| y.1.total_cmp(&x.1).then(x.0.cmp(&y.0)));
    largest.truncate(3);
    Ok((acc.into_iter().map(|c| c.value()).collect(), largest))
}

fn conj_all(a: &[Complex64]) -> Vec<Complex64> {
    a.iter().map(|v| v.conj()).collect()
}

fn log_floor(x: f64) -> f64 {
    x.ln().max(1.0)
}

/// The two terms of the sharp budget,
/// `c L^m y_1^{1-σ+ε} |t|^{-1/2}` and `c L^m y_2^{σ+ε} |t|^{d_F(1/2-σ)-1/2}`,
/// with `L = max(1, log(C_F |t|^{d_F}))`.
pub fn sharp_budget_terms(datum: &SelbergDatum, s: Complex64, m: u32, y1: f64, y2: f64, calibration: &Calibration) -> (f64, f64) {
    let k = datum.derived();
    let (sigma, t) = (s.re, s.im.abs());
    let eps = calibration.epsilon;
    let big_l = log_floor(k.c_f * t.powf(k.d_f)).powi(m as i32);
    let c = calibration.c_sharp * big_l;
    (
        c * y1.powf(1.0 - sigma + eps) * t.powf(-0.5),
        c * y2.powf(sigma + eps) * t.powf(k.d_f * (0.5 - sigma) - 0.5),
    )
}

/// Sharp-cutoff approximate functional equation.
pub fn afe_sharp(datum: &SelbergDatum, s: Complex64, m: u32, opts: &AfeOptions) -> Result<AfeResult> {
    check_strip(s, m)?;
    let (y1, y2) = cutoffs(datum, s.im, opts.y_split)?;
    let (n1, n2) = (y1.floor() as usize, y2.floor() as usize);
    let a = datum.coefficients(n1.max(n2).max(1))?;
    let one = |_| Ok(Complex64::new(1.0, 0.0));
    let (first, top1) = dirichlet_sums(&a, s, m as usize, n1, one)?;
    let main_sum_1 = first[m as usize];

    let abar = conj_all(&a);
    let (second, top2) = dirichlet_sums(&abar, 1.0 - s, m as usize, n2, one)?;
    let chis = chi_derivatives(datum, s, m as usize)?;
    let mut main2 = CompensatedSum::new();
    for r in 0..=m {
        let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
        main2.add(sign * binomial(m, r) * opts.chi_scale * chis[(m - r) as usize] * second[r as usize]);
    }
    let main_sum_2 = main2.value();
    let (b1, b2) = sharp_budget_terms(datum, s, m, y1, y2, &opts.calibration);
    Ok(AfeResult {
        value: main_sum_1 + main_sum_2,
        main_sum_1,
        main_sum_2,
        correction: Complex64::new(0.0, 0.0),
        error_estimate: b1 + b2,
        quadrature_error: 0.0,
        cutoffs: (y1, y2),
        mode: AfeMode::Sharp,
        diagnostics: diagnostics(&top1, &top2),
    })
}

fn diagnostics(top1: &[(usize, f64)], top2: &[(usize, f64)]) -> Vec<TermDiagnostic> {
    top1.iter()
        .map(|&(n, magnitude)| TermDiagnostic { sum: 1, n, magnitude })
        .chain(top2.iter().map(|&(n, magnitude)| TermDiagnostic { sum: 2, n, magnitude }))
        .collect()
}

/// The smallest admissible smoothing order, `floor(M_F(m)) + 1`.
pub fn default_smoothing_order(datum: &SelbergDatum, m: u32) -> usize {
    datum.derived().m_f(m).floor() as usize + 1
}

/// The two O-terms of the smoothed equation, without the constant.
pub fn smoothed_budget_terms(
    datum: &SelbergDatum,
    s: Complex64,
    m: u32,
    l: usize,
    y1: f64,
    y2: f64,
    phi: &SmoothingFunction,
) -> Result<(f64, f64)> {
    let k = datum.derived();
    let (sigma, t) = (s.re, s.im.abs());
    let p = datum.pole_order().saturating_sub(1) as i32;
    let t1 = y1.powf(1.0 - sigma) * log_floor(y1).powi(m as i32 + p) * t.powf(-(l as f64) / 2.0) * phi.l1_norm(l + 1)?;
    let mut logs = 0.0;
    for r in 0..=m as i32 {
        logs += log_floor(y2).powi(r + p) * log_floor(t).powi(m as i32 - r);
    }
    let t2 = y2.powf(sigma) * t.powf(k.d_f * (0.5 - sigma) - l as f64 / 2.0) * phi.dual().l1_norm(l + 1)? * logs;
    Ok((t1, t2))
}

/// Smoothed approximate functional equation with cutoff `φ` and order `l`.
pub fn afe_smoothed(
    datum: &SelbergDatum,
    s: Complex64,
    m: u32,
    phi: &SmoothingFunction,
    l: usize,
    opts: &AfeOptions,
) -> Result<AfeResult> {
    check_strip(s, m)?;
    if phi.is_sharp() {
        return Err(AfeError::Smoothness("the smoothed equation needs a smooth cutoff, got ξ".into()));
    }
    let m_f = datum.derived().m_f(m);
    if !(l as f64 > m_f) {
        return Err(AfeError::Hypothesis(format!("l = {l} must exceed M_F = {m_f}")));
    }
    if l > L_MAX {
        return Err(AfeError::Capacity(format!("l = {l} exceeds {L_MAX}")));
    }
    let (y1, y2) = cutoffs(datum, s.im, opts.y_split)?;
    let (hi1, hi2) = (phi.support().1, phi.dual().support().1);
    let (n1, n2) = ((hi1 * y1).floor() as usize, (hi2 * y2).floor() as usize);
    let a = datum.coefficients(n1.max(n2).max(1))?;
    let phi0 = phi.dual();
    let mu = m as usize;

    let gamma = contour_coefficients(datum, s, m, l, 0, Variant::Gamma)?;
    let delta = contour_coefficients(datum, 1.0 - s, m, l, mu, Variant::Delta)?;

    // First sum: φ(n/y_1) and ∑_{j>=1} φ^{(j)}(n/y_1)(-n/y_1)^j γ_j^{(0)}(s).
    let mut quad_mass = 0.0;
    let (main1, top1) = dirichlet_sums(&a, s, mu, n1, |n| Ok(Complex64::new(phi.eval(0, n as f64 / y1)?, 0.0)))?;
    let (corr1, _) = dirichlet_sums(&a, s, mu, n1, |n| {
        let x = n as f64 / y1;
        let d = phi.derivatives(x)?;
        let mut acc = Complex64::new(0.0, 0.0);
        let mut pow = 1.0;
        let mut mass = 0.0;
        for (j, dj) in d.iter().enumerate().take(l + 1).skip(1) {
            pow *= -x;
            acc += dj * pow * gamma.get(j, 0);
            mass += (dj * pow).abs();
        }
        quad_mass += mass * (n as f64).powf(-s.re) * (n as f64).ln().max(1.0).powi(m as i32);
        Ok(acc)
    })?;
    let quad1 = quad_mass * gamma.quadrature_error;

    // Second sums, one per r, with φ_0 and δ_j^{(m-r)}(1-s).
    let abar = conj_all(&a);
    let chi = chi_derivatives(datum, s, 0)?[0] * opts.chi_scale;
    let ratios = chi_log_ratios(datum, s, mu)?;
    let (main2_sums, top2) = dirichlet_sums(&abar, 1.0 - s, mu, n2, |n| {
        Ok(Complex64::new(phi0.eval(0, n as f64 / y2)?, 0.0))
    })?;
    let mut quad_mass2 = 0.0;
    let mut main2 = CompensatedSum::new();
    let mut corr2 = CompensatedSum::new();
    for r in 0..=mu {
        let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
        let coeff = chi * sign * binomial(m, r as u32);
        main2.add(coeff * ratios[mu - r] * main2_sums[r]);
        let (c, _) = dirichlet_sums(&abar, 1.0 - s, r, n2, |n| {
            let x = n as f64 / y2;
            let d = phi0.derivatives(x)?;
            let mut acc = Complex64::new(0.0, 0.0);
            let mut pow = 1.0;
            let mut mass = 0.0;
            for (j, dj) in d.iter().enumerate().take(l + 1).skip(1) {
                pow *= -x;
                acc += dj * pow * delta.get(j, mu - r);
                mass += (dj * pow).abs();
            }
            quad_mass2 += coeff.norm() * mass * (n as f64).powf(s.re - 1.0) * (n as f64).ln().max(1.0).powi(r as i32);
            Ok(acc)
        })?;
        corr2.add(coeff * c[r]);
    }
    let quad2 = quad_mass2 * delta.quadrature_error;

    let main_sum_1 = main1[mu];
    let main_sum_2 = main2.value();
    let correction = corr1[mu] + corr2.value();
    let (t1, t2) = smoothed_budget_terms(datum, s, m, l, y1, y2, phi)?;
    let quadrature_error = quad1 + quad2;
    Ok(AfeResult {
        value: main_sum_1 + main_sum_2 + correction,
        main_sum_1,
        main_sum_2,
        correction,
        error_estimate: opts.calibration.c_smoothed * (t1 + t2) + quadrature_error,
        quadrature_error,
        cutoffs: (y1, y2),
        mode: AfeMode::Smoothed,
        diagnostics: diagnostics(&top1, &top2),
    })
}

/// `∑_r (-1)^r C(m, r) χ_F^{(m-r)}(s) F̄^{(r)}(1-s)` from supplied
/// `values[r] = F̄^{(r)}(1-s)`.
pub fn reflect_fdfe(datum: &SelbergDatum, s: Complex64, m: u32, values: &[Complex64]) -> Result<Complex64> {
    reflect_fdfe_with(datum, s, m, values, &AfeOptions::default())
}

pub fn reflect_fdfe_with(
    datum: &SelbergDatum,
    s: Complex64,
    m: u32,
    values: &[Complex64],
    opts: &AfeOptions,
) -> Result<Complex64> {
    if values.len() != m as usize + 1 {
        return Err(AfeError::Argument(format!("expected {} reflected values, got {}", m + 1, values.len())));
    }
    let chis = chi_derivatives(datum, s, m as usize)?;
    let mut acc = CompensatedSum::new();
    for (r, v) in values.iter().enumerate() {
        let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
        acc.add(sign * binomial(m, r as u32) * opts.chi_scale * chis[m as usize - r] * v);
    }
    Ok(acc.value())
}

/// `F^{(m)}(s)` from the sharp equation, directly and through the
/// reflection identity applied to sharp values at `1 - s̄`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdfeCheck {
    pub direct: Complex64,
    pub reflected: Complex64,
    pub residual: f64,
    pub budget: f64,
}

pub fn fdfe_check(datum: &SelbergDatum, s: Complex64, m: u32, opts: &AfeOptions) -> Result<FdfeCheck> {
    let direct = afe_sharp(datum, s, m, opts)?;
    let s_ref = 1.0 - s.conj();
    let chis = chi_derivatives(datum, s, m as usize)?;
    let mut values = Vec::with_capacity(m as usize + 1);
    let mut budget = direct.error_estimate;
    for r in 0..=m {
        let at = afe_sharp(datum, s_ref, r, opts)?;
        values.push(at.value.conj());
        budget += binomial(m, r) * chis[(m - r) as usize].norm() * at.error_estimate;
    }
    let reflected = reflect_fdfe_with(datum, s, m, &values, opts)?;
    Ok(FdfeCheck { direct: direct.value, reflected, residual: (direct.value - reflected).norm(), budget })
}
