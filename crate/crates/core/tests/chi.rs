use std::collections::BTreeMap;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use afe_core::chi::{bell_expansion, chi_asymptotic, chi_derivative, chi_exact, chi_log_ratio};
use afe_core::oracle::{cauchy_circle, OracleConfig, OracleMethod};
use afe_core::SelbergDatum;

fn builtins() -> Vec<SelbergDatum> {
    SelbergDatum::BUILTIN_LABELS.iter().map(|l| SelbergDatum::builtin(l).unwrap()).collect()
}

/// `conj(χ(conj z))`.
fn chi_bar(d: &SelbergDatum, z: Complex64) -> Complex64 {
    chi_exact(d, z.conj()).unwrap().conj()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn reflection_is_unimodular(idx in 0usize..3, sigma in -0.5f64..1.5, t in 1.0f64..500.0, neg in any::<bool>()) {
        let d = &builtins()[idx];
        let s = Complex64::new(sigma, if neg { -t } else { t });
        let prod = chi_exact(d, s).unwrap() * chi_bar(d, 1.0 - s);
        prop_assert!((prod - 1.0).norm() < 1e-10, "{prod}");
    }

    #[test]
    fn conjugate_datum_is_chi_bar(idx in 0usize..3, sigma in 0.0f64..1.0, t in 5.0f64..200.0) {
        let d = &builtins()[idx];
        let s = Complex64::new(sigma, t);
        let via = chi_exact(&d.conjugate(), s).unwrap();
        prop_assert!((via - chi_bar(d, s)).norm() <= 1e-12 * via.norm());
    }
}

#[test]
fn zeta_chi_is_one_at_half() {
    let v = chi_exact(&SelbergDatum::zeta(), Complex64::new(0.5, 0.0)).unwrap();
    assert!((v - 1.0).norm() < 1e-12);
}

#[test]
fn modulus_on_critical_line() {
    let z = SelbergDatum::zeta();
    assert!((chi_exact(&z, Complex64::new(0.5, 100.0)).unwrap().norm() - 1.0).abs() < 0.03);
    let a = chi_asymptotic(&z, Complex64::new(0.5, 200.0)).unwrap();
    let exact = chi_exact(&z, Complex64::new(0.5, 200.0)).unwrap();
    assert!((a.value() - exact).norm() < 0.05);
    let rs = SelbergDatum::rankin_selberg_delta();
    assert!((chi_exact(&rs, Complex64::new(0.5, 50.0)).unwrap().norm() - 1.0).abs() < 0.05);
}

#[test]
fn asymptotic_budget_holds() {
    for d in builtins() {
        for &(sigma, t) in &[(0.0, 10.0), (0.3, -25.0), (1.0, 80.0), (0.5, 400.0)] {
            let s = Complex64::new(sigma, t);
            let a = chi_asymptotic(&d, s).unwrap();
            let rel = (chi_exact(&d, s).unwrap() / a.value() - 1.0).norm();
            assert!(rel <= a.rel_error_budget, "{} {s}: {rel} > {}", d.label(), a.rel_error_budget);
        }
    }
}

#[test]
fn log_ratio_asymptotics() {
    let z = SelbergDatum::zeta();
    let s = Complex64::new(0.5, 100.0);
    let l = (100.0 / (2.0 * std::f64::consts::PI)).ln();
    assert!((chi_log_ratio(&z, s, 1).unwrap() + l).norm() < 0.05);
    let r2 = chi_log_ratio(&z, s, 2).unwrap();
    assert!((r2.norm() / (l * l) - 1.0).abs() < 0.05);
}

fn richardson(d: &SelbergDatum, s: Complex64, r: usize) -> Complex64 {
    // central r-th difference, combined over h and h/2
    let diff = |h: f64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut binom = 1.0;
        for k in 0..=r {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let x = s + (r as f64 / 2.0 - k as f64) * h;
            acc += sign * binom * chi_exact(d, x).unwrap();
            binom = binom * (r - k) as f64 / (k + 1) as f64;
        }
        acc / h.powi(r as i32)
    };
    let h = 0.02;
    (4.0 * diff(h / 2.0) - diff(h)) / 3.0
}

#[test]
fn derivatives_match_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let data = builtins();
    for i in 0..20 {
        let d = &data[i % 3];
        let s = Complex64::new(rng.gen_range(0.0..1.0), rng.gen_range(10.0..100.0));
        for r in 1..=3 {
            let want = richardson(d, s, r);
            let got = chi_derivative(d, s, r).unwrap();
            assert!((got - want).norm() <= 1e-5 * want.norm(), "{} {s} r={r}: {got} vs {want}", d.label());
        }
    }
}

#[test]
fn derivative_matches_cauchy_circle() {
    let z = SelbergDatum::zeta();
    let s = Complex64::new(0.5, 40.0);
    let cfg = OracleConfig::new(OracleMethod::CauchyCircle).with_tol(1e-9);
    let v = cauchy_circle(|w| chi_exact(&z, w), s, 1, &cfg).unwrap();
    let d = chi_derivative(&z, s, 1).unwrap();
    assert!((v - d).norm() <= 1e-6 * d.norm());
}

type Poly = BTreeMap<Vec<u32>, u64>;

/// `Y_{n+1} = ∑_k C(n,k) g_{k+1} Y_{n-k}` over monomials in `g_1..g_r`.
fn symbolic_bell(r: usize) -> Poly {
    let mut ys: Vec<Poly> = vec![BTreeMap::from([(vec![0; r], 1)])];
    for n in 0..r {
        let mut next = Poly::new();
        let mut c = 1u64;
        for k in 0..=n {
            for (mono, coef) in &ys[n - k] {
                let mut m = mono.clone();
                m[k] += 1;
                *next.entry(m).or_default() += c * coef;
            }
            c = c * (n - k) as u64 / (k + 1) as u64;
        }
        ys.push(next);
    }
    ys.pop().unwrap()
}

#[test]
fn bell_coefficients_match_symbolic_exponential() {
    for r in 1..=5 {
        let want = symbolic_bell(r);
        let got: Poly = bell_expansion(r).unwrap().terms.iter().cloned().collect();
        assert_eq!(got, want, "order {r}");
    }
    let third: Poly = bell_expansion(3).unwrap().terms.iter().cloned().collect();
    assert_eq!(third, BTreeMap::from([(vec![0, 0, 1], 1), (vec![1, 1, 0], 3), (vec![3, 0, 0], 1)]));
}
