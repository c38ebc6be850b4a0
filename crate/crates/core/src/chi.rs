//! The factor `χ_F` of `F(s) = χ_F(s) F̄(1-s)`, its logarithmic-derivative
//! tower and the Bell-polynomial composition for `χ_F^{(r)} / χ_F`.

use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::datum::SelbergDatum;
use crate::error::{AfeError, Result};
use crate::special::{digamma, hurwitz_sum, log_gamma, sgn};

/// Tolerance for deciding that `s` sits on a pole of the gamma ratio.
pub const POLE_TOL: f64 = 1e-9;

/// Largest derivative order of the Bell composition.
pub const BELL_MAX: usize = 12;

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

/// Where the gamma ratio of `χ_F` is singular or vanishes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GammaPole {
    /// `s = -(μ_j + n)/λ_j`: pole of `Γ(λ_j s + μ_j)`, a zero of `χ_F`.
    Lower { j: usize, n: u64 },
    /// `s = 1 + (conj μ_j + n)/λ_j`: pole of `Γ(λ_j(1-s) + conj μ_j)`.
    Upper { j: usize, n: u64 },
}

impl std::fmt::Display for GammaPole {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Lower { j, n } => write!(f, "s = -(mu_{j} + {n})/lambda_{j}"),
            Self::Upper { j, n } => write!(f, "s = 1 + (conj(mu_{j}) + {n})/lambda_{j}"),
        }
    }
}

/// The first gamma-ratio singularity within `tol` of `s`, if any.
pub fn gamma_pole_at(datum: &SelbergDatum, s: Complex64, tol: f64) -> Option<GammaPole> {
    for (j, (&lambda, &mu)) in datum.lambdas().iter().zip(datum.mus()).enumerate() {
        let z1 = lambda * s + mu;
        if let Some(n) = near_integer_le_zero(z1, tol * lambda) {
            return Some(GammaPole::Lower { j, n });
        }
        let z2 = lambda * (1.0 - s) + mu.conj();
        if let Some(n) = near_integer_le_zero(z2, tol * lambda) {
            return Some(GammaPole::Upper { j, n });
        }
    }
    None
}

fn near_integer_le_zero(z: Complex64, tol: f64) -> Option<u64> {
    crate::special::near_nonpositive_integer(z, tol)
}

fn check_poles(datum: &SelbergDatum, s: Complex64) -> Result<()> {
    if !(s.re.is_finite() && s.im.is_finite()) {
        return Err(AfeError::Domain(format!("non-finite s = {s}")));
    }
    match gamma_pole_at(datum, s, POLE_TOL) {
        Some(p) => Err(AfeError::Pole(format!("{}: gamma-factor singularity at {p}", datum.label()))),
        None => Ok(()),
    }
}

/// The regions `E_1 ∪ E_2` around the gamma-ratio singularities: some
/// `λ_j s + μ_j` (for `E_1`) or `λ_j(1-s) + conj μ_j` (for `E_2`) has real
/// part below `delta` and imaginary part inside `(-1, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoleRegion {
    pub delta: f64,
}

impl Default for PoleRegion {
    fn default() -> Self {
        Self { delta: 0.1 }
    }
}

impl PoleRegion {
    pub fn contains(&self, datum: &SelbergDatum, s: Complex64) -> bool {
        let near = |z: Complex64| z.re < self.delta && z.im.abs() < 1.0;
        datum
            .lambdas()
            .iter()
            .zip(datum.mus())
            .any(|(&l, &m)| near(l * s + m) || near(l * (1.0 - s) + m.conj()))
    }
}

/// `log χ_F(s)`, accumulated factor by factor (not reduced mod 2πi).
pub fn chi_log(datum: &SelbergDatum, s: Complex64) -> Result<Complex64> {
    check_poles(datum, s)?;
    let mut acc = datum.omega().ln() + (1.0 - 2.0 * s) * datum.scale().ln();
    for (&lambda, &mu) in datum.lambdas().iter().zip(datum.mus()) {
        acc += log_gamma(lambda * (1.0 - s) + mu.conj())? - log_gamma(lambda * s + mu)?;
    }
    Ok(acc)
}

/// `χ_F(s) = ω Q^{1-2s} ∏ Γ(λ_j(1-s) + conj μ_j) / Γ(λ_j s + μ_j)`.
pub fn chi_exact(datum: &SelbergDatum, s: Complex64) -> Result<Complex64> {
    Ok(chi_log(datum, s)?.exp())
}

/// The leading form `ω C_F^{1/2-σ} |t|^{d_F(1/2-σ)} e^{iθ_F(t)}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiAsymptotic {
    pub modulus: f64,
    pub phase: f64,
    pub omega: Complex64,
    /// Bound on `|χ_F / leading - 1|`.
    pub rel_error_budget: f64,
}

impl ChiAsymptotic {
    pub fn value(&self) -> Complex64 {
        self.omega * Complex64::from_polar(self.modulus, self.phase)
    }
}

/// `θ_F(t) = d_F t - t log(C_F |t|^{d_F}) - 2 ∑ Im μ_j log(λ_j |t|)
///  + sgn(t)(q - d_F/2 - e_F)π/2`.
pub fn theta_f(datum: &SelbergDatum, t: f64) -> Result<f64> {
    let sg = sgn(t)?;
    let k = datum.derived();
    let log_t = t.abs().ln();
    let im_part: f64 = datum
        .lambdas()
        .iter()
        .zip(datum.mus())
        .map(|(l, m)| 2.0 * m.im * (l.ln() + log_t))
        .sum();
    Ok(k.d_f * t - t * (k.c_f.ln() + k.d_f * log_t) - im_part
        + sg * (datum.q() as f64 - k.d_f / 2.0 - k.e_f) * PI / 2.0)
}

/// The constant `c` in `|log(χ_F / leading)| <= c/|t|`, `|t| >= 10`.
pub fn chi_asymptotic_constant(datum: &SelbergDatum) -> f64 {
    2.0 * datum
        .lambdas()
        .iter()
        .zip(datum.mus())
        .map(|(l, m)| {
            let a = l + m.re;
            m.im.abs() + (a * a + a + 1.0 / 6.0 + m.im * m.im) / l
        })
        .sum::<f64>()
}

pub fn chi_asymptotic(datum: &SelbergDatum, s: Complex64) -> Result<ChiAsymptotic> {
    if !(s.im.abs() >= 10.0) {
        return Err(AfeError::Domain(format!("asymptotic chi needs |t| >= 10, got t = {}", s.im)));
    }
    let k = datum.derived();
    let half = 0.5 - s.re;
    let modulus = (half * (k.c_f.ln() + k.d_f * s.im.abs().ln())).exp();
    let c = chi_asymptotic_constant(datum);
    Ok(ChiAsymptotic {
        modulus,
        phase: theta_f(datum, s.im)?,
        omega: datum.omega(),
        rel_error_budget: (c / s.im.abs()).exp_m1(),
    })
}

/// `G^{(1)}(s) = (χ_F'/χ_F)(s) = -2 log Q - ∑ λ_j (ψ(λ_j s + μ_j) + ψ(λ_j(1-s) + conj μ_j))`.
pub fn g1(datum: &SelbergDatum, s: Complex64) -> Result<Complex64> {
    check_poles(datum, s)?;
    let mut acc = Complex64::new(-2.0 * datum.scale().ln(), 0.0);
    for (&lambda, &mu) in datum.lambdas().iter().zip(datum.mus()) {
        acc -= lambda * (digamma(lambda * s + mu)? + digamma(lambda * (1.0 - s) + mu.conj())?);
    }
    Ok(acc)
}

/// `G^{(l)}(s)`, the `(l-1)`-th derivative of `G^{(1)}`.
pub fn g_tower(datum: &SelbergDatum, s: Complex64, l: u32) -> Result<Complex64> {
    match l {
        0 => Err(AfeError::Argument("g_tower needs l >= 1".into())),
        1 => g1(datum, s),
        _ => {
            check_poles(datum, s)?;
            let fact: f64 = (1..l).map(f64::from).product();
            let sign = if l % 2 == 0 { -1.0 } else { 1.0 };
            let mut acc = Complex64::new(0.0, 0.0);
            for (&lambda, &mu) in datum.lambdas().iter().zip(datum.mus()) {
                let h1 = hurwitz_sum(lambda * s + mu, l)?;
                let h2 = hurwitz_sum(lambda * (1.0 - s) + mu.conj(), l)?;
                acc += lambda.powi(l as i32) * fact * (sign * h1 + h2);
            }
            Ok(acc)
        }
    }
}

/// `[G^{(1)}, ..., G^{(r)}]`.
pub fn g_tower_all(datum: &SelbergDatum, s: Complex64, r: usize) -> Result<Vec<Complex64>> {
    (1..=r as u32).map(|l| g_tower(datum, s, l)).collect()
}

/// Complete exponential Bell polynomial of order `r`:
/// `F^{(r)}/F = ∑ C_ℓ ∏ (G^{(i)})^{ℓ_i}` for `F = e^G`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BellExpansion {
    pub order: usize,
    /// `(ℓ_1, ..., ℓ_r)` with `∑ i ℓ_i = r`, and `r! / ∏ ℓ_i! (i!)^{ℓ_i}`.
    pub terms: Vec<(Vec<u32>, u64)>,
}

impl BellExpansion {
    fn build(r: usize) -> Self {
        let mut terms = Vec::new();
        let mut ell = vec![0u32; r];
        partitions(r, r, &mut ell, &mut terms);
        let fact = |n: u64| (1..=n).product::<u64>();
        let terms = terms
            .into_iter()
            .map(|ell: Vec<u32>| {
                let mut den = 1u64;
                for (i, &l) in ell.iter().enumerate() {
                    den *= fact(l as u64) * fact(i as u64 + 1).pow(l);
                }
                let c = fact(r as u64) / den;
                (ell, c)
            })
            .collect();
        Self { order: r, terms }
    }

    /// `∑ C_ℓ ∏ g_i^{ℓ_i}` where `g[i-1] = G^{(i)}`.
    pub fn evaluate(&self, g: &[Complex64]) -> Complex64 {
        if self.order == 0 {
            return one();
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (ell, c) in &self.terms {
            let mut prod = Complex64::new(*c as f64, 0.0);
            for (i, &l) in ell.iter().enumerate() {
                if l > 0 {
                    prod *= g[i].powi(l as i32);
                }
            }
            acc += prod;
        }
        acc
    }
}

// Enumerates multiplicities of parts <= `largest` summing to `remaining`.
fn partitions(remaining: usize, largest: usize, ell: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if remaining == 0 {
        out.push(ell.clone());
        return;
    }
    for part in (1..=largest.min(remaining)).rev() {
        ell[part - 1] += 1;
        partitions(remaining - part, part, ell, out);
        ell[part - 1] -= 1;
    }
}

pub fn bell_expansion(r: usize) -> Result<&'static BellExpansion> {
    static TABLE: OnceLock<Vec<BellExpansion>> = OnceLock::new();
    if r > BELL_MAX {
        return Err(AfeError::Capacity(format!("Bell order {r} exceeds the cap {BELL_MAX}")));
    }
    Ok(&TABLE.get_or_init(|| (0..=BELL_MAX).map(BellExpansion::build).collect())[r])
}

/// `(χ_F^{(r)} / χ_F)(s)`.
pub fn chi_log_ratio(datum: &SelbergDatum, s: Complex64, r: usize) -> Result<Complex64> {
    let bell = bell_expansion(r)?;
    if r == 0 {
        check_poles(datum, s)?;
        return Ok(one());
    }
    let g = g_tower_all(datum, s, r)?;
    Ok(bell.evaluate(&g))
}

/// `(χ_F^{(r)} / χ_F)(s)` for every `r = 0..=r_max`, sharing one tower.
pub fn chi_log_ratios(datum: &SelbergDatum, s: Complex64, r_max: usize) -> Result<Vec<Complex64>> {
    bell_expansion(r_max)?;
    let g = g_tower_all(datum, s, r_max)?;
    if r_max == 0 {
        check_poles(datum, s)?;
    }
    (0..=r_max).map(|r| Ok(bell_expansion(r)?.evaluate(&g[..r]))).collect()
}

/// `χ_F^{(r)}(s)`.
pub fn chi_derivative(datum: &SelbergDatum, s: Complex64, r: usize) -> Result<Complex64> {
    Ok(chi_exact(datum, s)? * chi_log_ratio(datum, s, r)?)
}

/// `χ_F^{(r)}(s)` for `r = 0..=r_max`.
pub fn chi_derivatives(datum: &SelbergDatum, s: Complex64, r_max: usize) -> Result<Vec<Complex64>> {
    let chi = chi_exact(datum, s)?;
    Ok(chi_log_ratios(datum, s, r_max)?.into_iter().map(|x| chi * x).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zeta_chi_at_half() {
        let z = SelbergDatum::zeta();
        assert!((chi_exact(&z, c(0.5, 0.0)).unwrap() - 1.0).norm() < 1e-12);
    }

    #[test]
    fn zeta_chi_matches_classical_form() {
        // χ(s) = 2^s π^{s-1} sin(πs/2) Γ(1-s)
        let z = SelbergDatum::zeta();
        let s = c(0.3, 7.0);
        let classical = (s * 2f64.ln() + (s - 1.0) * PI.ln() + log_gamma(1.0 - s).unwrap()).exp()
            * (PI * s / 2.0).sin();
        let ours = chi_exact(&z, s).unwrap();
        assert!((ours / classical - 1.0).norm() < 1e-12);
    }

    #[test]
    fn poles_are_reported() {
        let z = SelbergDatum::zeta();
        // s = -2n are zeros of χ_ζ, s = 1 + 2n are poles
        assert!(matches!(chi_exact(&z, c(-4.0, 0.0)), Err(AfeError::Pole(_))));
        assert!(matches!(g_tower(&z, c(3.0, 0.0), 1), Err(AfeError::Pole(_))));
        assert!(matches!(chi_log_ratio(&z, c(1.0, 0.0), 0), Err(AfeError::Pole(_))));
        assert!(chi_exact(&z, c(-3.0, 0.0)).is_ok());
        assert_eq!(gamma_pole_at(&z, c(5.0, 0.0), POLE_TOL), Some(GammaPole::Upper { j: 0, n: 2 }));
    }

    #[test]
    fn bell_small_orders() {
        assert_eq!(bell_expansion(1).unwrap().terms, vec![(vec![1], 1)]);
        let mut two = bell_expansion(2).unwrap().terms.clone();
        two.sort();
        assert_eq!(two, vec![(vec![0, 1], 1), (vec![2, 0], 1)]);
        let mut three = bell_expansion(3).unwrap().terms.clone();
        three.sort();
        assert_eq!(three, vec![(vec![0, 0, 1], 1), (vec![1, 1, 0], 3), (vec![3, 0, 0], 1)]);
        assert!(matches!(bell_expansion(13), Err(AfeError::Capacity(_))));
    }

    #[test]
    fn bell_counts_are_bell_numbers() {
        // with every G^{(i)} = 1 the sum is the Bell number B_r
        let bell_numbers = [1u64, 1, 2, 5, 15, 52, 203, 877, 4140, 21147, 115975, 678570, 4213597];
        for (r, b) in bell_numbers.iter().enumerate() {
            let total: u64 = if r == 0 { 1 } else { bell_expansion(r).unwrap().terms.iter().map(|t| t.1).sum() };
            assert_eq!(total, *b, "r = {r}");
        }
    }

    #[test]
    fn bell_for_quadratic_exponent() {
        // G = s², F''/F at s = 1 is 2 + 4
        let g = [c(2.0, 0.0), c(2.0, 0.0)];
        assert_eq!(bell_expansion(2).unwrap().evaluate(&g), c(6.0, 0.0));
    }

    #[test]
    fn zeta_log_ratio_asymptotics() {
        let z = SelbergDatum::zeta();
        let s = c(0.5, 100.0);
        let target = -(100.0 / (2.0 * PI)).ln();
        assert!((chi_log_ratio(&z, s, 1).unwrap() - target).norm() < 0.05);
        let r2 = chi_log_ratio(&z, s, 2).unwrap();
        assert!((r2 / (target * target) - 1.0).norm() < 0.05);
    }

    #[test]
    fn asymptotic_leading_form() {
        let z = SelbergDatum::zeta();
        let a = chi_asymptotic(&z, c(0.0, 100.0)).unwrap();
        assert!((a.modulus - (100.0 / (2.0 * PI)).sqrt()).abs() < 1e-12);
        let exact = chi_exact(&z, c(0.5, 200.0)).unwrap();
        let lead = chi_asymptotic(&z, c(0.5, 200.0)).unwrap();
        assert!((exact / lead.value() - 1.0).norm() <= 0.05);
        assert!((exact / lead.value() - 1.0).norm() <= lead.rel_error_budget);
        assert!(chi_asymptotic(&z, c(0.5, 5.0)).is_err());
    }

    #[test]
    fn pole_region_contains_poles() {
        let z = SelbergDatum::zeta();
        let region = PoleRegion::default();
        assert!(region.contains(&z, c(0.0, 0.0)));
        assert!(region.contains(&z, c(-4.0, 0.5)));
        assert!(region.contains(&z, c(3.0, 0.0)));
        assert!(!region.contains(&z, c(0.5, 10.0)));
    }
}
