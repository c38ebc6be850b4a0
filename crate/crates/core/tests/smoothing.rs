use num_complex::Complex64;
use proptest::prelude::*;

use afe_core::error::AfeError;
use afe_core::SmoothingFunction;

const ALPHAS: [f64; 3] = [0.1, 0.3, 0.45];
const TS: [f64; 2] = [100.0, 1000.0];

#[test]
fn mellin_kernel_is_one_at_zero() {
    let phi = SmoothingFunction::base_bump();
    for l in [0, 1, 3] {
        let k = phi.mellin_k(Complex64::new(0.0, 0.0), l).unwrap();
        assert!((k - 1.0).norm() < 1e-10, "l={l}: {k}");
    }
    // deeper integration by parts trades digits for decay
    let k = phi.mellin_k(Complex64::new(0.0, 0.0), 7).unwrap();
    assert!((k - 1.0).norm() < 1e-7, "{k}");
    let k = phi.dual().mellin_k(Complex64::new(0.0, 0.0), 2).unwrap();
    assert!((k - 1.0).norm() < 1e-10);
}

#[test]
fn mellin_kernel_reflects_through_dual() {
    let phi = SmoothingFunction::base_bump();
    let phi0 = phi.dual();
    for i in 0..20 {
        let w = Complex64::new(-1.5 + 0.15 * i as f64, -4.0 + 0.4 * i as f64);
        let a = phi.mellin_k(w, 4).unwrap();
        let b = phi0.mellin_k(-w, 4).unwrap();
        assert!((a - b).norm() < 1e-9 * a.norm().max(1.0), "{w}: {a} vs {b}");
    }
}

#[test]
fn mellin_kernel_is_independent_of_order() {
    let phi = SmoothingFunction::base_bump();
    let w = Complex64::new(0.7, 3.0);
    let k0 = phi.mellin_k(w, 0).unwrap();
    for l in 1..=6 {
        assert!((phi.mellin_k(w, l).unwrap() - k0).norm() < 1e-8);
    }
}

#[test]
fn narrowed_cutoffs_are_flat_outside_transition() {
    for alpha in ALPHAS {
        for t in TS {
            let phi = SmoothingFunction::base_bump().phi_alpha(alpha, t).unwrap();
            let scale = t.powf(alpha);
            let lo = 1.0 - 0.5 / scale;
            let hi = 1.0 + 1.0 / scale;
            assert!(lo >= 0.5 && hi <= 2.0);
            for f in [phi.clone(), phi.dual()] {
                let (a, b) = f.support();
                for rho in [0.0, 0.25, 0.5 * a, a] {
                    let d = f.derivatives(rho).unwrap();
                    assert_eq!(d[0], 1.0, "alpha={alpha} t={t} rho={rho}");
                    assert!(d[1..].iter().all(|v| *v == 0.0));
                }
                for rho in [b, b + 1e-3, 2.0, 50.0] {
                    let d = f.derivatives(rho).unwrap();
                    assert!(d.iter().all(|v| *v == 0.0), "alpha={alpha} t={t} rho={rho}");
                }
            }
            assert_eq!(phi.support(), (lo, hi));
        }
    }
}

#[test]
fn narrowed_norms_scale_with_t() {
    for alpha in ALPHAS {
        for j in 1..=4 {
            let scaled: Vec<f64> = TS
                .iter()
                .map(|&t| {
                    let phi = SmoothingFunction::base_bump().phi_alpha(alpha, t).unwrap();
                    phi.l1_norm(j).unwrap() / t.powf(alpha * (j as f64 - 1.0))
                })
                .collect();
            let ratio = scaled[0].max(scaled[1]) / scaled[0].min(scaled[1]);
            assert!(ratio <= 4.0, "alpha={alpha} j={j}: {scaled:?}");
        }
    }
}

#[test]
fn first_derivative_has_unit_mass() {
    let phi = SmoothingFunction::base_bump();
    assert!((phi.l1_norm(1).unwrap() - 1.0).abs() < 1e-10);
    assert!((phi.dual().l1_norm(1).unwrap() - 1.0).abs() < 1e-10);
}

#[test]
fn sharp_cutoff_is_rejected_where_smoothness_is_needed() {
    let xi = SmoothingFunction::sharp();
    assert!(xi.is_sharp());
    assert_eq!(xi.eval(0, 1.0).unwrap(), 0.5);
    assert!(matches!(xi.l1_norm(2), Err(AfeError::Smoothness(_))));
    assert!(matches!(xi.phi_alpha(0.3, 100.0), Err(AfeError::Smoothness(_)) | Err(AfeError::Argument(_))));
}

#[test]
fn alpha_outside_range_is_rejected() {
    let phi = SmoothingFunction::base_bump();
    assert!(phi.phi_alpha(0.6, 100.0).is_err());
    assert!(phi.phi_alpha(-0.1, 100.0).is_err());
    assert!(phi.phi_alpha(0.3, 0.5).is_err());
}

proptest! {
    #[test]
    fn values_stay_in_unit_interval(rho in 0.0f64..3.0) {
        let phi = SmoothingFunction::base_bump();
        let v = phi.eval(0, rho).unwrap();
        prop_assert!((0.0..=1.0).contains(&v));
        let v0 = phi.dual().eval(0, rho).unwrap();
        prop_assert!((0.0..=1.0).contains(&v0));
    }

    #[test]
    fn dual_is_one_minus_reflection(rho in 0.3f64..3.0) {
        let phi = SmoothingFunction::base_bump();
        let lhs = phi.dual().eval(0, rho).unwrap();
        let rhs = 1.0 - phi.eval(0, 1.0 / rho).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-14);
    }
}
