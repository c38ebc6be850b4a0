//! Benchmarks for the evaluation paths, shared by `benches/bench.rs`.

use criterion::Criterion;
use std::hint::black_box;
use num_complex::Complex64;

use afe_core::afe::{afe_sharp, afe_smoothed, contour_coefficients, default_smoothing_order, AfeOptions, Variant};
use afe_core::chi::chi_derivatives;
use afe_core::oracle::{euler_maclaurin_zeta, OracleConfig, OracleMethod};
use afe_core::{SelbergDatum, SmoothingFunction};

pub fn benchmarks(c: &mut Criterion) {
    let zeta = SelbergDatum::zeta();
    let rs = SelbergDatum::rankin_selberg_delta();
    let opts = AfeOptions::default();
    let s = Complex64::new(0.5, 200.0);

    c.bench_function("chi_derivatives zeta r=6", |b| {
        b.iter(|| chi_derivatives(&zeta, black_box(s), 6).unwrap())
    });
    c.bench_function("afe_sharp zeta m=2 t=200", |b| {
        b.iter(|| afe_sharp(&zeta, black_box(s), 2, &opts).unwrap())
    });
    c.bench_function("afe_sharp rankin_selberg m=1 t=200", |b| {
        b.iter(|| afe_sharp(&rs, black_box(s), 1, &opts).unwrap())
    });
    c.bench_function("contour_coefficients zeta l=5", |b| {
        b.iter(|| contour_coefficients(&zeta, black_box(s), 1, 5, 1, Variant::Gamma).unwrap())
    });
    let phi = SmoothingFunction::base_bump();
    let l = default_smoothing_order(&zeta, 1);
    c.bench_function("afe_smoothed zeta m=1 t=200", |b| {
        b.iter(|| afe_smoothed(&zeta, black_box(s), 1, &phi, l, &opts).unwrap())
    });
    let cfg = OracleConfig::new(OracleMethod::EulerMaclaurinZeta);
    c.bench_function("euler_maclaurin_zeta m=2 t=200", |b| {
        b.iter(|| euler_maclaurin_zeta(black_box(s), 2, &cfg).unwrap())
    });
}
