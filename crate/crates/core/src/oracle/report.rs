//! The verification suite: engine output against the oracles and against
//! its own identities, as a flat table of pass/fail rows.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::io::Write;

use super::{euler_maclaurin_zeta, OracleConfig, OracleMethod};
use crate::afe::{
    afe_sharp, afe_smoothed, default_smoothing_order, fdfe_check, gamma_delta_coeff, sharp_budget_terms,
    smoothed_budget_terms, AfeOptions, Variant,
};
use crate::calibration::Calibration;
use crate::chi::chi_log_ratio;
use crate::datum::{CoefficientKind, SelbergDatum};
use crate::error::{AfeError, Result};
use crate::smoothing::SmoothingFunction;

pub const SIGMAS: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];
pub const TS: [f64; 5] = [30.0, 60.0, 100.0, 200.0, 400.0];
pub const SLOPE_TS: [f64; 5] = [50.0, 100.0, 200.0, 400.0, 800.0];
pub const SPLITS: [f64; 3] = [0.5, 1.5, 2.0];
pub const CALIBRATION_SIGMAS: [f64; 4] = [0.1, 0.3, 0.6, 0.9];
pub const CALIBRATION_TS: [f64; 5] = [25.0, 45.0, 80.0, 150.0, 300.0];
pub const SLOPE_TARGET: f64 = -0.25;
pub const SLOPE_TOLERANCE: f64 = 0.2;
pub const RESIDUE_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub m_max: u32,
    pub residue_points: usize,
    pub options: AfeOptions,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self { seed: 0, m_max: 2, residue_points: 10, options: AfeOptions::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub label: String,
    pub sigma: f64,
    pub t: f64,
    pub m: u32,
    pub mode: String,
    pub value_re: f64,
    pub value_im: f64,
    pub residual: f64,
    pub budget: f64,
    pub pass: bool,
}

impl ReportRow {
    fn new(label: &str, s: Complex64, m: u32, mode: &str, value: Complex64, residual: f64, budget: f64) -> Self {
        Self {
            label: label.to_string(),
            sigma: s.re,
            t: s.im,
            m,
            mode: mode.to_string(),
            value_re: value.re,
            value_im: value.im,
            residual,
            budget,
            pass: residual.is_finite() && residual <= budget,
        }
    }

    fn failed(label: &str, s: Complex64, m: u32, mode: &str) -> Self {
        let nan = Complex64::new(f64::NAN, f64::NAN);
        Self::new(label, s, m, mode, nan, f64::INFINITY, 0.0)
    }

    fn from_result(label: &str, s: Complex64, m: u32, mode: &str, r: Result<(Complex64, f64, f64)>) -> Self {
        match r {
            Ok((v, residual, budget)) => Self::new(label, s, m, mode, v, residual, budget),
            Err(_) => Self::failed(label, s, m, mode),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Report {
    pub rows: Vec<ReportRow>,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ReportRow> {
        self.rows.iter().filter(|r| !r.pass)
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        for row in &self.rows {
            out.serialize(row).map_err(csv_error)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }
}

fn dup(e: &AfeError) -> AfeError {
    AfeError::Argument(e.to_string())
}

fn csv_error(e: csv::Error) -> AfeError {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => AfeError::Io(io),
        other => AfeError::Parse(format!("{other:?}")),
    }
}

/// Least-squares slope of `log y` against `log x`.
pub fn fit_slope(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(AfeError::Argument("slope fit needs at least two paired points".into()));
    }
    if xs.iter().chain(ys).any(|v| !(*v > 0.0 && v.is_finite())) {
        return Err(AfeError::Argument("slope fit needs positive finite data".into()));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    Ok(sxy / sxx)
}

pub fn is_zeta(datum: &SelbergDatum) -> bool {
    datum.coefficient_source().kind() == CoefficientKind::Zeta
        && datum.lambdas() == [0.5]
        && datum.mus() == [Complex64::new(0.0, 0.0)]
        && (datum.scale() - std::f64::consts::PI.powf(-0.5)).abs() < 1e-15
}

fn zeta_oracle(s: Complex64, m: u32) -> Result<Complex64> {
    euler_maclaurin_zeta(s, m, &OracleConfig::new(OracleMethod::EulerMaclaurinZeta))
}

fn grid(m_max: u32, sigmas: &[f64], ts: &[f64]) -> Vec<(Complex64, u32)> {
    let mut out = Vec::new();
    for m in 0..=m_max {
        for &sigma in sigmas {
            for &t in ts {
                out.push((Complex64::new(sigma, t), m));
            }
        }
    }
    out
}

fn zeta_rows(datum: &SelbergDatum, cfg: &SuiteConfig) -> Vec<ReportRow> {
    let label = datum.label();
    let opts = &cfg.options;
    let phi = SmoothingFunction::base_bump();
    let per_point: Vec<Vec<ReportRow>> = grid(cfg.m_max, &SIGMAS, &TS)
        .into_par_iter()
        .map(|(s, m)| {
            let oracle = zeta_oracle(s, m);
            let sharp = afe_sharp(datum, s, m, opts);
            let smooth = afe_smoothed(datum, s, m, &phi, default_smoothing_order(datum, m), opts);
            let vs_oracle = |r: &Result<crate::afe::AfeResult>| -> Result<(Complex64, f64, f64)> {
                let r = r.as_ref().map_err(dup)?;
                let o = oracle.as_ref().map_err(dup)?;
                Ok((r.value, (r.value - o).norm(), r.error_estimate))
            };
            let gap = || -> Result<(Complex64, f64, f64)> {
                let a = sharp.as_ref().map_err(dup)?;
                let b = smooth.as_ref().map_err(dup)?;
                Ok((a.value - b.value, (a.value - b.value).norm(), a.error_estimate + b.error_estimate))
            };
            vec![
                ReportRow::from_result(label, s, m, "sharp", vs_oracle(&sharp)),
                ReportRow::from_result(label, s, m, "smoothed", vs_oracle(&smooth)),
                ReportRow::from_result(label, s, m, "sharp_vs_smoothed", gap()),
            ]
        })
        .collect();
    let mut rows = Vec::new();
    for mode in 0..3 {
        rows.extend(per_point.iter().map(|r| r[mode].clone()));
    }
    rows.push(slope_row(datum, opts));
    rows
}

/// Sharp residuals against the oracle at `σ = 1/2`, `m = 0`.
pub fn slope_residuals(datum: &SelbergDatum, opts: &AfeOptions) -> Result<Vec<f64>> {
    SLOPE_TS
        .par_iter()
        .map(|&t| {
            let s = Complex64::new(0.5, t);
            Ok((afe_sharp(datum, s, 0, opts)?.value - zeta_oracle(s, 0)?).norm())
        })
        .collect()
}

fn slope_row(datum: &SelbergDatum, opts: &AfeOptions) -> ReportRow {
    let s = Complex64::new(0.5, SLOPE_TS[0]);
    let fitted = slope_residuals(datum, opts).and_then(|res| fit_slope(&SLOPE_TS, &res));
    match fitted {
        Ok(slope) => ReportRow::new(
            datum.label(),
            s,
            0,
            "slope",
            Complex64::new(slope, 0.0),
            (slope - SLOPE_TARGET).abs(),
            SLOPE_TOLERANCE,
        ),
        Err(_) => ReportRow::failed(datum.label(), s, 0, "slope"),
    }
}

fn identity_rows(datum: &SelbergDatum, cfg: &SuiteConfig) -> Vec<ReportRow> {
    let label = datum.label();
    let opts = &cfg.options;
    let per_point: Vec<Vec<ReportRow>> = grid(cfg.m_max, &SIGMAS, &TS)
        .into_par_iter()
        .map(|(s, m)| {
            let mut rows = Vec::with_capacity(1 + SPLITS.len());
            let fdfe = fdfe_check(datum, s, m, opts).map(|f| (f.direct - f.reflected, f.residual, f.budget));
            rows.push(ReportRow::from_result(label, s, m, "fdfe", fdfe));
            let base = afe_sharp(datum, s, m, opts);
            for k in SPLITS {
                let split = || -> Result<(Complex64, f64, f64)> {
                    let b = base.as_ref().map_err(dup)?;
                    let r = afe_sharp(datum, s, m, &opts.with_split(k))?;
                    Ok((r.value, (r.value - b.value).norm(), r.error_estimate + b.error_estimate))
                };
                rows.push(ReportRow::from_result(label, s, m, &format!("ysplit_{k}"), split()));
            }
            rows
        })
        .collect();
    let mut rows = Vec::new();
    for mode in 0..=SPLITS.len() {
        rows.extend(per_point.iter().map(|r| r[mode].clone()));
    }
    rows
}

/// `j = 0` contour coefficients against the residue `(χ^{(r)}/χ)(1-s)` at
/// seeded random points; `m` holds `r`.
fn residue_rows(datum: &SelbergDatum, cfg: &SuiteConfig) -> Vec<ReportRow> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let points: Vec<(Complex64, u32)> = (0..cfg.residue_points)
        .map(|_| {
            let sigma = rng.gen_range(0.0..=1.0);
            let t = rng.gen_range(20.0..200.0);
            (Complex64::new(sigma, t), rng.gen_range(0..=3u32))
        })
        .collect();
    points
        .into_par_iter()
        .map(|(s, r)| {
            let check = || -> Result<(Complex64, f64, f64)> {
                let quad = gamma_delta_coeff(datum, s, 0, r as usize, Variant::Gamma, 0)?;
                let want = chi_log_ratio(datum, 1.0 - s, r as usize)?;
                Ok((quad, (quad - want).norm() / want.norm().max(1e-300), RESIDUE_TOLERANCE))
            };
            ReportRow::from_result(datum.label(), s, r, "residue", check())
        })
        .collect()
}

/// Every check that applies to `datum`: oracle residuals for ζ, the
/// reflection identity, y-split invariance and residue consistency.
pub fn residual_suite(datum: &SelbergDatum, cfg: &SuiteConfig) -> Report {
    let mut rows = Vec::new();
    if is_zeta(datum) {
        rows.extend(zeta_rows(datum, cfg));
    }
    rows.extend(identity_rows(datum, cfg));
    rows.extend(residue_rows(datum, cfg));
    Report { rows }
}

/// One row of the error-scaling table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub label: String,
    pub sigma: f64,
    pub m: u32,
    pub t: f64,
    pub residual: f64,
    pub budget_first: f64,
    pub budget_second: f64,
    pub residual_slope: f64,
    pub second_term_slope: f64,
}

/// Sharp residual and the two budget terms along `ts`. The residual is
/// against the oracle for ζ and the gap to the split `k = 2` otherwise.
pub fn scan(datum: &SelbergDatum, sigma: f64, m: u32, ts: &[f64], opts: &AfeOptions) -> Result<Vec<ScanRow>> {
    if ts.len() < 4 {
        return Err(AfeError::Argument(format!("scan needs at least 4 t values, got {}", ts.len())));
    }
    let zeta = is_zeta(datum);
    let points: Vec<(f64, f64, f64)> = ts
        .par_iter()
        .map(|&t| {
            let s = Complex64::new(sigma, t);
            let r = afe_sharp(datum, s, m, opts)?;
            let residual = if zeta {
                (r.value - zeta_oracle(s, m)?).norm()
            } else {
                (r.value - afe_sharp(datum, s, m, &opts.with_split(2.0))?.value).norm()
            };
            let (b1, b2) = sharp_budget_terms(datum, s, m, r.cutoffs.0, r.cutoffs.1, &opts.calibration);
            Ok((residual, b1, b2))
        })
        .collect::<Result<_>>()?;
    let abs_t: Vec<f64> = ts.iter().map(|t| t.abs()).collect();
    let residuals: Vec<f64> = points.iter().map(|p| p.0).collect();
    let seconds: Vec<f64> = points.iter().map(|p| p.2).collect();
    let residual_slope = fit_slope(&abs_t, &residuals).unwrap_or(f64::NAN);
    let second_term_slope = fit_slope(&abs_t, &seconds).unwrap_or(f64::NAN);
    Ok(ts
        .iter()
        .zip(points)
        .map(|(&t, (residual, budget_first, budget_second))| ScanRow {
            label: datum.label().to_string(),
            sigma,
            m,
            t,
            residual,
            budget_first,
            budget_second,
            residual_slope,
            second_term_slope,
        })
        .collect())
}

/// Measures the budget constants on ζ over a grid disjoint from the
/// verification grid: twice the largest ratio of residual to the budget
/// with unit constant.
pub fn calibrate(epsilon: f64) -> Result<Calibration> {
    let zeta = SelbergDatum::zeta();
    let unit = Calibration { epsilon, c_sharp: 1.0, c_smoothed: 1.0 };
    let phi = SmoothingFunction::base_bump();
    let ratios: Vec<(f64, f64)> = grid(2, &CALIBRATION_SIGMAS, &CALIBRATION_TS)
        .into_par_iter()
        .map(|(s, m)| {
            let exact = zeta_oracle(s, m)?;
            let opts = AfeOptions { calibration: unit, ..AfeOptions::default() };
            let sharp = afe_sharp(&zeta, s, m, &opts)?;
            let l = default_smoothing_order(&zeta, m);
            let smooth = afe_smoothed(&zeta, s, m, &phi, l, &opts)?;
            let (y1, y2) = smooth.cutoffs;
            let (t1, t2) = smoothed_budget_terms(&zeta, s, m, l, y1, y2, &phi)?;
            let excess = ((smooth.value - exact).norm() - smooth.quadrature_error).max(0.0);
            Ok(((sharp.value - exact).norm() / sharp.error_estimate, excess / (t1 + t2)))
        })
        .collect::<Result<_>>()?;
    let c_sharp = 2.0 * ratios.iter().map(|r| r.0).fold(0.0, f64::max);
    let c_smoothed = 2.0 * ratios.iter().map(|r| r.1).fold(0.0, f64::max);
    Ok(Calibration { epsilon, c_sharp, c_smoothed })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_power_law() {
        let xs = [1.0, 2.0, 4.0, 8.0];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powf(-0.3)).collect();
        assert!((fit_slope(&xs, &ys).unwrap() + 0.3).abs() < 1e-12);
        assert!(fit_slope(&xs, &[1.0, 0.0, 1.0, 1.0]).is_err());
    }

    #[test]
    fn scan_needs_four_points() {
        let z = SelbergDatum::zeta();
        let r = scan(&z, 0.5, 0, &[50.0, 100.0, 200.0], &AfeOptions::default());
        assert!(matches!(r, Err(AfeError::Argument(_))));
    }

    #[test]
    fn zeta_is_recognized() {
        assert!(is_zeta(&SelbergDatum::zeta()));
        assert!(!is_zeta(&SelbergDatum::delta()));
    }
}
