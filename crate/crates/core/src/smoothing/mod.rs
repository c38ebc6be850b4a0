//! Smooth cutoffs `φ` that equal 1 on `[0, 1/2]` and vanish on `[2, ∞)`,
//! their duals `φ_0(ρ) = 1 - φ(1/ρ)`, the narrowed members `φ_α`, the sharp
//! cutoff `ξ`, and the Mellin-type transform `K_φ`.

mod jet;

pub use jet::{Jet, JET_LEN};

use num_complex::Complex64;
use std::sync::OnceLock;

use crate::error::{AfeError, Result};
use crate::quadrature::{adaptive, adaptive_real};

/// Below this distance from an edge of the bump the transition is flat to
/// far beyond double precision (`e^{-600}`).
const EDGE: f64 = 1.0 / 600.0;

/// Highest derivative order available.
pub const MAX_DERIVATIVE: usize = JET_LEN - 1;

#[derive(Debug, Clone, PartialEq)]
enum Kernel {
    Bump,
    Sharp,
    Dual(Box<Kernel>),
    Narrowed { inner: Box<Kernel>, alpha: f64, scale: f64 },
}

impl Kernel {
    fn is_sharp(&self) -> bool {
        match self {
            Kernel::Sharp => true,
            Kernel::Bump => false,
            Kernel::Dual(inner) | Kernel::Narrowed { inner, .. } => inner.is_sharp(),
        }
    }

    /// The interval outside which the function is locally constant.
    fn transition(&self) -> (f64, f64) {
        match self {
            Kernel::Bump => (0.5, 2.0),
            Kernel::Sharp => (1.0, 1.0),
            Kernel::Dual(inner) => {
                let (a, b) = inner.transition();
                (1.0 / b, 1.0 / a)
            }
            Kernel::Narrowed { inner, scale, .. } => {
                let (a, b) = inner.transition();
                (1.0 + (a - 1.0) / scale, 1.0 + (b - 1.0) / scale)
            }
        }
    }

    fn value(&self, rho: f64) -> f64 {
        match self {
            Kernel::Sharp => {
                if rho < 1.0 {
                    1.0
                } else if rho > 1.0 {
                    0.0
                } else {
                    0.5
                }
            }
            _ => self.jet(Jet::variable(rho)).value(),
        }
    }

    /// Composition `φ ∘ x` for a smooth kernel.
    fn jet(&self, x: Jet) -> Jet {
        let x0 = x.value();
        match self {
            Kernel::Bump => {
                if x0 <= 0.5 + EDGE {
                    return Jet::constant(1.0);
                }
                if x0 >= 2.0 - EDGE {
                    return Jet::constant(0.0);
                }
                // φ = 1 / (1 + e^u), u = 1/(2-x) - 1/(x-1/2)
                let u = x.affine(2.0, -1.0).recip() - x.affine(-0.5, 1.0).recip();
                let one = Jet::constant(1.0);
                if u.value() <= 0.0 {
                    (one + u.exp()).recip()
                } else {
                    let e = (-u).exp();
                    e * (one + e).recip()
                }
            }
            Kernel::Sharp => unreachable!("sharp cutoff has no jet"),
            Kernel::Dual(inner) => {
                if x0 <= 0.0 {
                    return Jet::constant(1.0);
                }
                Jet::constant(1.0) - inner.jet(x.recip())
            }
            Kernel::Narrowed { inner, scale, .. } => {
                if x0 <= 1.0 - 0.5 / scale {
                    return Jet::constant(1.0);
                }
                if x0 >= 1.0 + 1.0 / scale {
                    return Jet::constant(0.0);
                }
                inner.jet(x.affine(1.0 - scale, *scale))
            }
        }
    }
}

/// A member of the smoothing family (or the sharp cutoff `ξ`).
#[derive(Debug, Clone)]
pub struct SmoothingFunction {
    kernel: Kernel,
    norms: [OnceLock<f64>; JET_LEN],
}

impl PartialEq for SmoothingFunction {
    fn eq(&self, other: &Self) -> bool {
        self.kernel == other.kernel
    }
}

impl SmoothingFunction {
    fn from_kernel(kernel: Kernel) -> Self {
        Self { kernel, norms: std::array::from_fn(|_| OnceLock::new()) }
    }

    /// `φ(ρ) = h(2-ρ) / (h(2-ρ) + h(ρ-1/2))` on `(1/2, 2)` with `h(x) = e^{-1/x}`.
    pub fn base_bump() -> Self {
        Self::from_kernel(Kernel::Bump)
    }

    /// The indicator `ξ` of `[0, 1)`.
    pub fn sharp() -> Self {
        Self::from_kernel(Kernel::Sharp)
    }

    /// `φ_0(ρ) = 1 - φ(1/ρ)`.
    pub fn dual(&self) -> Self {
        Self::from_kernel(Kernel::Dual(Box::new(self.kernel.clone())))
    }

    /// `φ_α(ρ) = φ(1 + (ρ-1)|t|^α)`, equal to 1 below `1 - 1/(2|t|^α)` and
    /// to 0 above `1 + |t|^{-α}`.
    pub fn phi_alpha(&self, alpha: f64, t: f64) -> Result<Self> {
        if !(0.0..=0.5).contains(&alpha) {
            return Err(AfeError::Argument(format!("alpha must lie in [0, 1/2], got {alpha}")));
        }
        if !(t.abs() >= 10.0) {
            return Err(AfeError::Domain(format!("phi_alpha needs |t| >= 10, got {t}")));
        }
        if self.is_sharp() {
            return Err(AfeError::Smoothness("cannot narrow the sharp cutoff".into()));
        }
        Ok(Self::from_kernel(Kernel::Narrowed {
            inner: Box::new(self.kernel.clone()),
            alpha,
            scale: t.abs().powf(alpha),
        }))
    }

    pub fn is_sharp(&self) -> bool {
        self.kernel.is_sharp()
    }

    pub fn alpha(&self) -> Option<f64> {
        match &self.kernel {
            Kernel::Narrowed { alpha, .. } => Some(*alpha),
            Kernel::Dual(inner) => match inner.as_ref() {
                Kernel::Narrowed { alpha, .. } => Some(*alpha),
                _ => None,
            },
            _ => None,
        }
    }

    /// `(ρ_lo, ρ_hi)`: the function is constant on `[0, ρ_lo]` and on `[ρ_hi, ∞)`.
    pub fn support(&self) -> (f64, f64) {
        self.kernel.transition()
    }

    fn require_smooth(&self, what: &str) -> Result<()> {
        if self.is_sharp() {
            Err(AfeError::Smoothness(format!("{what} requires a smooth cutoff")))
        } else {
            Ok(())
        }
    }

    /// `φ^{(j)}(ρ)`.
    pub fn eval(&self, j: usize, rho: f64) -> Result<f64> {
        if !(rho >= 0.0) {
            return Err(AfeError::Domain(format!("rho must be >= 0, got {rho}")));
        }
        if j == 0 {
            return Ok(self.kernel.value(rho));
        }
        if j > MAX_DERIVATIVE {
            return Err(AfeError::Capacity(format!("derivative order {j} > {MAX_DERIVATIVE}")));
        }
        Ok(self.derivatives(rho)?[j])
    }

    /// `φ^{(j)}(ρ)` for `j = 0..=13`.
    pub fn derivatives(&self, rho: f64) -> Result<[f64; JET_LEN]> {
        self.require_smooth("derivatives")?;
        if !(rho >= 0.0) {
            return Err(AfeError::Domain(format!("rho must be >= 0, got {rho}")));
        }
        Ok(self.kernel.jet(Jet::variable(rho)).derivatives())
    }

    /// `‖φ^{(j)}‖_1` over `[0, ∞)`, memoised.
    pub fn l1_norm(&self, j: usize) -> Result<f64> {
        if j > MAX_DERIVATIVE {
            return Err(AfeError::Capacity(format!("derivative order {j} > {MAX_DERIVATIVE}")));
        }
        if let Some(v) = self.norms[j].get() {
            return Ok(*v);
        }
        let v = self.compute_l1(j)?;
        Ok(*self.norms[j].get_or_init(|| v))
    }

    fn compute_l1(&self, j: usize) -> Result<f64> {
        let (lo, hi) = self.support();
        if self.is_sharp() {
            return if j == 0 { Ok(1.0) } else { Err(AfeError::Smoothness("ξ has no derivatives".into())) };
        }
        let panels = 32;
        let (a, b) = if j == 0 { (0.0, hi) } else { (lo, hi) };
        let width = (b - a) / panels as f64;
        let mut total = 0.0;
        for p in 0..panels {
            let x0 = a + p as f64 * width;
            let (v, _) = adaptive_real(
                |rho| self.kernel.jet(Jet::variable(rho)).derivatives()[j].abs(),
                x0,
                x0 + width,
                1e-11,
            )?;
            total += v;
        }
        Ok(total)
    }

    /// `K_φ(w)` through `(-1)^{l+1} / ((w+1)⋯(w+l)) ∫ φ^{(l+1)}(ρ) ρ^{w+l} dρ`.
    ///
    /// The result is entire in `w`; near `w = -k` with `k <= l` the order is
    /// lowered to `k - 1`, where the prefactor is regular.
    pub fn mellin_k(&self, w: Complex64, l: usize) -> Result<Complex64> {
        if self.is_sharp() {
            return if w.re > 0.0 {
                Ok(Complex64::new(1.0, 0.0))
            } else {
                Err(AfeError::Smoothness(format!("K_ξ(w) is only defined for Re w > 0, got {w}")))
            };
        }
        if l + 1 > MAX_DERIVATIVE {
            return Err(AfeError::Capacity(format!("mellin order l = {l} too large")));
        }
        let l = (1..=l).find(|k| (w + *k as f64).norm() < 1e-6).map_or(l, |k| k - 1);
        let (lo, hi) = self.support();
        let panels = 16;
        let width = (hi - lo) / panels as f64;
        let power = w + l as f64;
        let scale = self.l1_norm(l + 1)? * lo.powf(power.re).max(hi.powf(power.re));
        let mut integral = Complex64::new(0.0, 0.0);
        for p in 0..panels {
            let x0 = lo + p as f64 * width;
            let (v, _) = adaptive(
                |rho| {
                    let d = self.kernel.jet(Jet::variable(rho)).derivatives()[l + 1];
                    (power * rho.ln()).exp() * d
                },
                x0,
                x0 + width,
                1e-15 * scale / panels as f64,
                1e-13,
                2000,
            )?;
            integral += v;
        }
        let mut pref = Complex64::new(if l % 2 == 0 { -1.0 } else { 1.0 }, 0.0);
        for i in 1..=l {
            pref /= w + i as f64;
        }
        Ok(pref * integral)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bump_flat_regions() {
        let phi = SmoothingFunction::base_bump();
        assert_eq!(phi.eval(0, 0.25).unwrap(), 1.0);
        assert_eq!(phi.eval(0, 3.0).unwrap(), 0.0);
        assert_eq!(phi.eval(3, 0.1).unwrap(), 0.0);
        let mid = phi.eval(0, 1.0).unwrap();
        assert!(mid > 0.0 && mid < 1.0);
    }

    #[test]
    fn bump_is_monotone() {
        let phi = SmoothingFunction::base_bump();
        let mut prev = 1.0;
        for i in 0..=300 {
            let v = phi.eval(0, 0.5 + 1.5 * i as f64 / 300.0).unwrap();
            assert!(v <= prev + 1e-15);
            prev = v;
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let phi = SmoothingFunction::base_bump();
        let h = 1e-5;
        for &rho in &[0.7, 1.0, 1.4, 1.9] {
            let d = phi.derivatives(rho).unwrap();
            let fd = (phi.eval(0, rho + h).unwrap() - phi.eval(0, rho - h).unwrap()) / (2.0 * h);
            assert!((d[1] - fd).abs() < 1e-8 * (1.0 + fd.abs()));
            let fd2 = (phi.eval(1, rho + h).unwrap() - phi.eval(1, rho - h).unwrap()) / (2.0 * h);
            assert!((d[2] - fd2).abs() < 1e-7 * (1.0 + fd2.abs()));
        }
    }

    #[test]
    fn total_variation_is_one() {
        let phi = SmoothingFunction::base_bump();
        assert!((phi.l1_norm(1).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn k_at_zero_is_one() {
        let phi = SmoothingFunction::base_bump();
        for l in 0..5 {
            assert!((phi.mellin_k(Complex64::new(0.0, 0.0), l).unwrap() - 1.0).norm() < 1e-10);
        }
    }

    #[test]
    fn sharp_is_flagged() {
        let xi = SmoothingFunction::sharp();
        assert_eq!(xi.mellin_k(Complex64::new(0.5, 3.0), 2).unwrap(), Complex64::new(1.0, 0.0));
        assert!(matches!(xi.mellin_k(Complex64::new(-0.5, 0.0), 2), Err(AfeError::Smoothness(_))));
        assert!(matches!(xi.eval(1, 0.5), Err(AfeError::Smoothness(_))));
        assert!(matches!(xi.phi_alpha(0.2, 100.0), Err(AfeError::Smoothness(_))));
    }

    #[test]
    fn phi_alpha_arguments() {
        let phi = SmoothingFunction::base_bump();
        assert!(matches!(phi.phi_alpha(0.6, 100.0), Err(AfeError::Argument(_))));
        assert!(matches!(phi.phi_alpha(0.2, 5.0), Err(AfeError::Domain(_))));
        let pa = phi.phi_alpha(0.5, 100.0).unwrap();
        assert_eq!(pa.support(), (0.95, 1.1));
        assert_eq!(pa.eval(0, 0.95).unwrap(), 1.0);
        assert_eq!(pa.eval(0, 1.1).unwrap(), 0.0);
        assert_eq!(pa.alpha(), Some(0.5));
    }
}
