//! Functional-equation data of a Selberg-class function and its derived
//! constants.

mod coeffs;
mod descriptor;
mod tau;

pub use coeffs::{divisor_bound_constant, CoefficientKind, CoefficientSource};
pub use descriptor::Descriptor;
pub use tau::{ramanujan_tau, TAU_MAX};

use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{AfeError, Result};

/// `Φ(s) = Q^s ∏ Γ(λ_j s + μ_j) F(s)` satisfies `Φ(s) = ω conj(Φ(1 - conj s))`.
#[derive(Debug, Clone)]
pub struct SelbergDatum {
    label: String,
    scale: f64,
    lambdas: Vec<f64>,
    mus: Vec<Complex64>,
    omega: Complex64,
    pole_order: u32,
    coeffs: Arc<CoefficientSource>,
    conjugated: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DerivedConstants {
    /// Degree `2 ∑ λ_j`.
    pub d_f: f64,
    /// `2 ∑ Re μ_j`.
    pub e_f: f64,
    /// `(Q ∏ λ_j^{λ_j})²`.
    pub c_f: f64,
    /// `(Q ∏ λ_j^{λ_j + Im μ_j})²`.
    pub c_f_prime: f64,
    /// `2 ∑ max(0, floor(λ_j/2 - Re μ_j))`.
    pub f_f: u32,
    pub nu: Vec<u32>,
    q: usize,
    pole_order: u32,
}

impl DerivedConstants {
    /// `3d/4 + (e - q)/2 + 2(p + m) + (m + 1) f`.
    pub fn m_f(&self, m: u32) -> f64 {
        0.75 * self.d_f + 0.5 * (self.e_f - self.q as f64)
            + 2.0 * (self.pole_order + m) as f64
            + (m + 1) as f64 * self.f_f as f64
    }
}

impl SelbergDatum {
    pub fn new(
        label: impl Into<String>,
        scale: f64,
        lambdas: Vec<f64>,
        mus: Vec<Complex64>,
        omega: Complex64,
        pole_order: u32,
        coeffs: Arc<CoefficientSource>,
    ) -> Result<Self> {
        let label = label.into();
        if label.trim().is_empty() {
            return Err(invalid("label", "must not be empty"));
        }
        if lambdas.is_empty() {
            return Err(invalid("q", "at least one gamma factor is required"));
        }
        if lambdas.len() != mus.len() {
            return Err(invalid(
                "mu",
                format!("{} lambdas but {} mus", lambdas.len(), mus.len()),
            ));
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(invalid("Q", format!("must be positive, got {scale}")));
        }
        if let Some(l) = lambdas.iter().find(|l| !(**l > 0.0 && l.is_finite())) {
            return Err(invalid("lambda", format!("must be positive, got {l}")));
        }
        if let Some(mu) = mus.iter().find(|m| !(m.re >= 0.0 && m.re.is_finite() && m.im.is_finite())) {
            return Err(invalid("mu", format!("Re mu must be >= 0, got {mu}")));
        }
        if !((omega.norm() - 1.0).abs() <= 1e-14) {
            return Err(invalid("omega", format!("|omega| must be 1, got {}", omega.norm())));
        }
        Ok(Self {
            label,
            scale,
            lambdas,
            mus,
            omega,
            pole_order,
            coeffs,
            conjugated: false,
        })
    }

    /// Riemann ζ.
    pub fn zeta() -> Self {
        Self::new(
            "zeta",
            PI.powf(-0.5),
            vec![0.5],
            vec![Complex64::new(0.0, 0.0)],
            Complex64::new(1.0, 0.0),
            1,
            Arc::new(CoefficientSource::zeta()),
        )
        .expect("zeta datum")
    }

    /// The L-function of the discriminant form Δ, analytically normalised.
    pub fn delta() -> Self {
        Self::new(
            "delta",
            1.0 / (2.0 * PI),
            vec![1.0],
            vec![Complex64::new(5.5, 0.0)],
            Complex64::new(1.0, 0.0),
            0,
            Arc::new(CoefficientSource::cusp_form_delta()),
        )
        .expect("delta datum")
    }

    /// `∑ λ_Δ(n)² n^{-s}` with the gamma data of the Rankin–Selberg
    /// convolution of Δ with itself. The series carries no `ζ(2s)` factor.
    pub fn rankin_selberg_delta() -> Self {
        Self::new(
            "rankin_selberg_delta",
            (2.0 * PI).powi(-2),
            vec![1.0, 1.0],
            vec![Complex64::new(0.0, 0.0), Complex64::new(11.0, 0.0)],
            Complex64::new(1.0, 0.0),
            1,
            Arc::new(CoefficientSource::rankin_selberg_delta()),
        )
        .expect("rankin-selberg datum")
    }

    pub const BUILTIN_LABELS: [&'static str; 3] = ["zeta", "delta", "rankin_selberg_delta"];

    pub fn builtin(label: &str) -> Option<Self> {
        match label {
            "zeta" => Some(Self::zeta()),
            "delta" => Some(Self::delta()),
            "rankin_selberg_delta" | "rankin_selberg" => Some(Self::rankin_selberg_delta()),
            _ => None,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn q(&self) -> usize {
        self.lambdas.len()
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn mus(&self) -> &[Complex64] {
        &self.mus
    }

    pub fn omega(&self) -> Complex64 {
        self.omega
    }

    pub fn pole_order(&self) -> u32 {
        self.pole_order
    }

    pub fn coefficient_source(&self) -> &CoefficientSource {
        &self.coeffs
    }

    /// True when every coefficient is real, so `F̄ = F`.
    pub fn has_real_coefficients(&self) -> bool {
        self.coeffs.is_real()
    }

    /// `a(1), ..., a(n_max)` (conjugated for a conjugate datum).
    pub fn coefficients(&self, n_max: usize) -> Result<Vec<Complex64>> {
        let mut a = self.coeffs.coefficients(n_max)?;
        if self.conjugated {
            a.iter_mut().for_each(|v| *v = v.conj());
        }
        Ok(a)
    }

    /// The datum of `F̄(s) = conj(F(conj s))`.
    pub fn conjugate(&self) -> Self {
        Self {
            label: format!("{}_bar", self.label),
            mus: self.mus.iter().map(|m| m.conj()).collect(),
            omega: self.omega.conj(),
            conjugated: !self.conjugated,
            ..self.clone()
        }
    }

    pub fn derived(&self) -> DerivedConstants {
        let d_f = 2.0 * self.lambdas.iter().sum::<f64>();
        let e_f = 2.0 * self.mus.iter().map(|m| m.re).sum::<f64>();
        let log_prod: f64 = self.lambdas.iter().map(|l| l * l.ln()).sum();
        let log_prod_prime: f64 = self
            .lambdas
            .iter()
            .zip(&self.mus)
            .map(|(l, m)| (l + m.im) * l.ln())
            .sum();
        let c_f = (2.0 * (self.scale.ln() + log_prod)).exp();
        let c_f_prime = (2.0 * (self.scale.ln() + log_prod_prime)).exp();
        let nu: Vec<u32> = self.lambdas.iter().zip(&self.mus).map(|(l, m)| nu_j(*l, *m)).collect();
        let f_f = 2 * nu.iter().sum::<u32>();
        DerivedConstants { d_f, e_f, c_f, c_f_prime, f_f, nu, q: self.q(), pole_order: self.pole_order }
    }
}

/// `ν_j = floor(λ/2 - Re μ)` when `Re μ <= λ/2`, else 0.
pub(crate) fn nu_j(lambda: f64, mu: Complex64) -> u32 {
    if mu.re > lambda / 2.0 {
        0
    } else {
        (lambda / 2.0 - mu.re).floor() as u32
    }
}

fn invalid(field: &'static str, reason: impl Into<String>) -> AfeError {
    AfeError::Validation { field, reason: reason.into() }
}
