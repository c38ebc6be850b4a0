//! Dirichlet coefficient sources with an extend-only cache.

use num_complex::Complex64;
use std::sync::RwLock;

use super::tau::{ramanujan_tau, TAU_MAX};
use crate::error::{AfeError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoefficientKind {
    Zeta,
    CuspFormDelta,
    RankinSelberg,
    UserTable,
}

impl CoefficientKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Zeta => "zeta",
            Self::CuspFormDelta => "delta",
            Self::RankinSelberg => "rankin_selberg",
            Self::UserTable => "table",
        }
    }
}

#[derive(Debug)]
pub struct CoefficientSource {
    kind: CoefficientKind,
    growth_epsilon: f64,
    table: Option<Vec<Complex64>>,
    cache: RwLock<Vec<Complex64>>,
}

impl CoefficientSource {
    pub fn zeta() -> Self {
        Self::built_in(CoefficientKind::Zeta, 0.0)
    }

    /// `λ_Δ(n) = τ(n) / n^{11/2}`.
    pub fn cusp_form_delta() -> Self {
        Self::built_in(CoefficientKind::CuspFormDelta, 0.25)
    }

    /// `λ_Δ(n) conj(λ_Δ(n)) = λ_Δ(n)²`.
    pub fn rankin_selberg_delta() -> Self {
        Self::built_in(CoefficientKind::RankinSelberg, 0.25)
    }

    fn built_in(kind: CoefficientKind, growth_epsilon: f64) -> Self {
        Self { kind, growth_epsilon, table: None, cache: RwLock::new(Vec::new()) }
    }

    /// A finite user table `a(1), ..., a(N)`.
    pub fn table(values: Vec<Complex64>, growth_epsilon: f64) -> Result<Self> {
        if values.is_empty() {
            return Err(AfeError::Validation {
                field: "coeffs",
                reason: "coefficient table is empty".into(),
            });
        }
        if (values[0] - 1.0).norm() > 1e-12 {
            return Err(AfeError::Validation {
                field: "coeffs",
                reason: format!("a(1) must be 1, got {}", values[0]),
            });
        }
        if values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(AfeError::Validation {
                field: "coeffs",
                reason: "non-finite coefficient".into(),
            });
        }
        Ok(Self {
            kind: CoefficientKind::UserTable,
            growth_epsilon,
            table: Some(values),
            cache: RwLock::new(Vec::new()),
        })
    }

    pub fn kind(&self) -> CoefficientKind {
        self.kind
    }

    pub fn growth_epsilon(&self) -> f64 {
        self.growth_epsilon
    }

    /// True when every coefficient is real.
    pub fn is_real(&self) -> bool {
        self.table.as_ref().map_or(true, |t| t.iter().all(|v| v.im == 0.0))
    }

    /// How many coefficients can be produced, if limited.
    pub fn capacity(&self) -> Option<usize> {
        match self.kind {
            CoefficientKind::Zeta => None,
            CoefficientKind::CuspFormDelta | CoefficientKind::RankinSelberg => Some(TAU_MAX),
            CoefficientKind::UserTable => self.table.as_ref().map(Vec::len),
        }
    }

    /// `a(1), ..., a(n_max)`.
    pub fn coefficients(&self, n_max: usize) -> Result<Vec<Complex64>> {
        if n_max == 0 {
            return Err(AfeError::Argument("n_max must be >= 1".into()));
        }
        if let Some(cap) = self.capacity() {
            if n_max > cap {
                return Err(AfeError::OutOfRange { required: n_max, available: cap });
            }
        }
        {
            let cache = self.cache.read().expect("coefficient cache poisoned");
            if cache.len() >= n_max {
                return Ok(cache[..n_max].to_vec());
            }
        }
        let mut cache = self.cache.write().expect("coefficient cache poisoned");
        if cache.len() < n_max {
            let target = match self.capacity() {
                Some(cap) => cap.min(n_max.max(2 * cache.len())),
                None => n_max.max(2 * cache.len()),
            };
            *cache = self.generate(target);
        }
        Ok(cache[..n_max].to_vec())
    }

    fn generate(&self, n_max: usize) -> Vec<Complex64> {
        match self.kind {
            CoefficientKind::Zeta => vec![Complex64::new(1.0, 0.0); n_max],
            CoefficientKind::CuspFormDelta => normalized_tau(n_max)
                .into_iter()
                .map(|x| Complex64::new(x, 0.0))
                .collect(),
            CoefficientKind::RankinSelberg => normalized_tau(n_max)
                .into_iter()
                .map(|x| Complex64::new(x * x, 0.0))
                .collect(),
            CoefficientKind::UserTable => self.table.as_ref().expect("table")[..n_max].to_vec(),
        }
    }

    /// A bound `|a(n)| <= c n^e` valid for every `n`, used for tail estimates.
    pub fn growth_bound(&self) -> (f64, f64) {
        match self.kind {
            CoefficientKind::Zeta => (1.0, 0.0),
            // Deligne: |λ_Δ(n)| <= d(n).
            CoefficientKind::CuspFormDelta => (divisor_bound_constant(0.25), 0.25),
            CoefficientKind::RankinSelberg => {
                let c = divisor_bound_constant(0.125);
                (c * c, 0.25)
            }
            CoefficientKind::UserTable => {
                let e = self.growth_epsilon;
                let table = self.table.as_ref().expect("table");
                let c = table
                    .iter()
                    .enumerate()
                    .map(|(i, a)| a.norm() / ((i + 1) as f64).powf(e))
                    .fold(0.0, f64::max);
                (c, e)
            }
        }
    }

    /// `max_{n <= n_max} |a(n)| / n^eps`.
    pub fn growth_ratio(&self, n_max: usize, eps: f64) -> Result<f64> {
        let a = self.coefficients(n_max)?;
        Ok(a.iter()
            .enumerate()
            .map(|(i, v)| v.norm() / ((i + 1) as f64).powf(eps))
            .fold(0.0, f64::max))
    }
}

fn normalized_tau(n_max: usize) -> Vec<f64> {
    ramanujan_tau(n_max)
        .into_iter()
        .enumerate()
        .map(|(i, tau)| tau as f64 / ((i + 1) as f64).powf(5.5))
        .collect()
}

/// `C(ε) = ∏_{p < 2^{1/ε}} max_a (a+1) p^{-aε}`, so that `d(n) <= C(ε) n^ε`.
pub fn divisor_bound_constant(eps: f64) -> f64 {
    let limit = 2f64.powf(1.0 / eps).ceil() as usize;
    let mut sieve = vec![true; limit.max(2)];
    let mut c = 1.0;
    for p in 2..limit {
        if !sieve[p] {
            continue;
        }
        let mut q = p * p;
        while q < limit {
            sieve[q] = false;
            q += p;
        }
        let mut best: f64 = 1.0;
        for a in 1..64 {
            best = best.max((a + 1) as f64 * (p as f64).powf(-(a as f64) * eps));
        }
        c *= best;
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta_is_all_ones() {
        let a = CoefficientSource::zeta().coefficients(5).unwrap();
        assert!(a.iter().all(|v| *v == Complex64::new(1.0, 0.0)));
    }

    #[test]
    fn delta_second_coefficient() {
        let a = CoefficientSource::cusp_form_delta().coefficients(2).unwrap();
        assert_eq!(a[0].re, 1.0);
        assert!((a[1].re - (-24.0 / 2f64.powf(5.5))).abs() < 1e-15);
    }

    #[test]
    fn rankin_selberg_second_coefficient() {
        let a = CoefficientSource::rankin_selberg_delta().coefficients(2).unwrap();
        assert!((a[1].re - 576.0 / 2048.0).abs() < 1e-15);
    }

    #[test]
    fn cache_extension_keeps_prefix() {
        let src = CoefficientSource::cusp_form_delta();
        let short = src.coefficients(50).unwrap();
        let long = src.coefficients(500).unwrap();
        assert_eq!(&long[..50], &short[..]);
        assert_eq!(src.coefficients(50).unwrap(), short);
    }

    #[test]
    fn table_limits() {
        let src = CoefficientSource::table(vec![Complex64::new(1.0, 0.0); 3], 0.0).unwrap();
        match src.coefficients(4) {
            Err(AfeError::OutOfRange { required, available }) => {
                assert_eq!((required, available), (4, 3));
            }
            other => panic!("{other:?}"),
        }
        assert!(CoefficientSource::table(Vec::new(), 0.0).is_err());
    }

    #[test]
    fn divisor_constant_bounds_divisor_counts() {
        let c = divisor_bound_constant(0.25);
        assert!(c > 8.0 && c < 9.0, "{c}");
        let n_max = 20_000;
        let mut d = vec![0u32; n_max + 1];
        for i in 1..=n_max {
            for j in (i..=n_max).step_by(i) {
                d[j] += 1;
            }
        }
        for (n, &dn) in d.iter().enumerate().skip(1) {
            assert!(dn as f64 <= c * (n as f64).powf(0.25));
        }
    }
}
