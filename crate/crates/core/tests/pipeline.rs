//! End-to-end checks of the integrand/peak/schedule pipeline against dense
//! recomputation, self-convergence and qualitative curve properties.

mod common;

use adia_core::analysis::{boundary_spread, runtime_scaling, Quantity, ScalingFit, SpreadOptions};
use adia_core::lattice::{marked_site_representatives, Boundary, LatticeSpec, ModelParams};
use adia_core::schedule::{
    sample_integrand, summarize_peak, summarize_peak_with, GridConfig, SummaryOptions,
};
use adia_core::spectral::{OpenModel, PeriodicModel, SolveOptions};
use common::*;
use nalgebra::DVector;

fn params() -> ModelParams {
    ModelParams::new(1.0, 1.0, 1.0).unwrap()
}

#[test]
fn curve_matches_dense_recomputation_d2_l6() {
    let spec = LatticeSpec::new(2, 6, Boundary::Periodic, None).unwrap();
    let model = PeriodicModel::new(&spec, params()).unwrap();
    let curve = sample_integrand(&model, &GridConfig::default()).unwrap();
    let a = dense_adjacency(2, 6, true);
    // recompute every 7th sample densely (full recomputation is slow)
    for p in curve.points().iter().step_by(7) {
        if p.s == 0.0 || p.s == 1.0 {
            continue; // endpoint excited states are degenerate-limit choices
        }
        let h = dense_hamiltonian(&a, 1.0, 1.0, p.s, 0);
        let (e0, v0, e1, v1) = refined_two_lowest(&h);
        assert!((p.e0 - e0).abs() < 1e-8, "s = {}", p.s);
        assert!((p.e1 - e1).abs() < 1e-8);
        let dv01 = dense_v01(&a, 1.0, 1.0, 0, &v0, &v1);
        assert!(
            (p.v01 - dv01).abs() < 1e-8,
            "s = {}: V01 {} vs {}",
            p.s,
            p.v01,
            dv01
        );
        let integrand = dv01 / ((e1 - e0) * (e1 - e0));
        assert!((p.integrand - integrand).abs() < 1e-6 * integrand.max(1.0));
    }
}

#[test]
fn self_convergence_d4_l6_peak_product() {
    let spec = LatticeSpec::new(4, 6, Boundary::Periodic, None).unwrap();
    let model = PeriodicModel::new(&spec, params()).unwrap();
    let coarse =
        summarize_peak(&sample_integrand(&model, &GridConfig::default()).unwrap()).unwrap();
    let dense_grid = GridConfig {
        base_points: 192,
        min_peak_points: 64,
        ..GridConfig::default()
    };
    let fine = summarize_peak(&sample_integrand(&model, &dense_grid).unwrap()).unwrap();
    let rel = (coarse.t_estimate - fine.t_estimate).abs() / fine.t_estimate;
    assert!(rel < 0.02, "H*W self-convergence at {rel:e}");
}

#[test]
fn peak_sharpens_with_system_size_d3() {
    let m6 = PeriodicModel::new(
        &LatticeSpec::new(3, 6, Boundary::Periodic, None).unwrap(),
        params(),
    )
    .unwrap();
    let m8 = PeriodicModel::new(
        &LatticeSpec::new(3, 8, Boundary::Periodic, None).unwrap(),
        params(),
    )
    .unwrap();
    let s6 = summarize_peak(&sample_integrand(&m6, &GridConfig::default()).unwrap()).unwrap();
    let s8 = summarize_peak(&sample_integrand(&m8, &GridConfig::default()).unwrap()).unwrap();
    assert!(s8.h > s6.h, "height should grow with L");
    assert!(s8.width < s6.width, "width should shrink with L");
    assert!(s6.t_estimate <= s6.t_lae && s6.t_lae <= s6.t_const);
    assert!(s8.t_estimate <= s8.t_lae && s8.t_lae <= s8.t_const);
}

#[test]
fn quadrature_tolerance_halving_within_error_estimate() {
    let spec = LatticeSpec::new(2, 8, Boundary::Periodic, None).unwrap();
    let model = PeriodicModel::new(&spec, params()).unwrap();
    let curve = sample_integrand(&model, &GridConfig::default()).unwrap();
    let s1 = summarize_peak_with(&curve, &SummaryOptions { quad_rel_tol: 1e-4 }).unwrap();
    let s2 = summarize_peak_with(&curve, &SummaryOptions { quad_rel_tol: 5e-5 }).unwrap();
    assert!(
        (s1.t_lae - s2.t_lae).abs() <= s1.t_lae_error.max(1e-12 * s1.t_lae),
        "delta {:e} vs estimate {:e}",
        (s1.t_lae - s2.t_lae).abs(),
        s1.t_lae_error
    );
}

#[test]
fn lattice_peak_metrics_stable_under_grid_doubling() {
    let spec = LatticeSpec::new(2, 8, Boundary::Periodic, None).unwrap();
    let model = PeriodicModel::new(&spec, params()).unwrap();
    let s1 = summarize_peak(&sample_integrand(&model, &GridConfig::default()).unwrap()).unwrap();
    let doubled = GridConfig {
        base_points: 192,
        ..GridConfig::default()
    };
    let s2 = summarize_peak(&sample_integrand(&model, &doubled).unwrap()).unwrap();
    assert!((s1.h - s2.h).abs() < 1e-3 * s1.h);
    assert!((s1.width - s2.width).abs() < 1e-3 * s1.width);
    assert!((s1.s_peak - s2.s_peak).abs() < 1e-3);
}

#[test]
fn fit_stability_without_smallest_size_d3() {
    let sizes = [6usize, 8, 10, 12, 16, 20, 24];
    let full = runtime_scaling(
        3,
        &sizes,
        &params(),
        Quantity::TEstimate,
        &GridConfig::default(),
    )
    .unwrap();
    let trimmed = runtime_scaling(
        3,
        &sizes[1..],
        &params(),
        Quantity::TEstimate,
        &GridConfig::default(),
    )
    .unwrap();
    let shift = (full.windowed.slope - trimmed.windowed.slope).abs();
    assert!(shift < 0.03, "slope shift {shift}");
}

#[test]
fn spread_orbit_reduction_equals_brute_force_d2_l5() {
    // run the open pipeline for every one of the 25 marked sites and check
    // the orbit-reduced statistics reproduce the full-site ones
    let p = params();
    let opts = SpreadOptions::default();
    let report = boundary_spread(2, 5, &p, &opts).unwrap();

    let mut heights = Vec::new();
    let mut locations = Vec::new();
    for site in 0..25usize {
        let spec = LatticeSpec::new(2, 5, Boundary::Open, Some(site)).unwrap();
        let model = OpenModel::new(&spec, p, opts.solve).unwrap();
        let curve = sample_integrand(&model, &opts.grid).unwrap();
        let sum = summarize_peak(&curve).unwrap();
        heights.push(sum.h);
        locations.push(sum.s_peak);
    }
    let spread = |vals: &[f64]| -> f64 {
        let mean = vals.iter().sum::<f64>() / vals.len() as f64;
        let max = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let min = vals.iter().cloned().fold(f64::INFINITY, f64::min);
        (max - min) / mean
    };
    let bf_height = spread(&heights);
    let bf_location = spread(&locations);
    assert!(
        (report.relative_spread_height - bf_height).abs() < 1e-6 * bf_height.max(1e-6),
        "height spread {} vs brute-force {}",
        report.relative_spread_height,
        bf_height
    );
    assert!(
        (report.relative_spread_location - bf_location).abs() < 1e-6 * bf_location.max(1e-6),
        "location spread {} vs brute-force {}",
        report.relative_spread_location,
        bf_location
    );
    // weighted orbit sizes cover the lattice
    let spec = LatticeSpec::new(2, 5, Boundary::Open, Some(0)).unwrap();
    let total: u64 = marked_site_representatives(&spec)
        .unwrap()
        .iter()
        .map(|r| r.orbit_size)
        .sum();
    assert_eq!(total, 25);
}

#[test]
fn classical_baseline_and_synthetic_slopes() {
    let n_points: Vec<(f64, f64)> = [64.0f64, 216.0, 512.0, 1000.0]
        .iter()
        .map(|&n| (n, n))
        .collect();
    let fit = ScalingFit::from_points(n_points).unwrap();
    assert_eq!(fit.slope, 1.0);
    let quad: Vec<(f64, f64)> = [4.0f64, 8.0, 16.0, 32.0]
        .iter()
        .map(|&n| (n, 3.0 * n * n))
        .collect();
    let fit = ScalingFit::from_points(quad).unwrap();
    assert!((fit.slope - 2.0).abs() < 1e-12);
}

#[test]
fn open_curve_matches_dense_at_shared_points() {
    // open pipeline values vs dense recomputation (spec open-path oracle)
    let p = params();
    let spec = LatticeSpec::new(2, 4, Boundary::Open, Some(5)).unwrap();
    let model = OpenModel::new(&spec, p, SolveOptions::default()).unwrap();
    let curve = sample_integrand(&model, &GridConfig::default()).unwrap();
    let a = dense_adjacency(2, 4, false);
    for pt in curve.points().iter().step_by(9) {
        if pt.s < 1e-6 || pt.s > 1.0 - 1e-6 {
            continue;
        }
        let h = dense_hamiltonian(&a, p.t, p.mu, pt.s, 5);
        let (e0, v0, e1, v1) = refined_two_lowest(&h);
        assert!((pt.e0 - e0).abs() < 1e-9, "s = {}", pt.s);
        assert!((pt.e1 - e1).abs() < 1e-9);
        let dv01 = dense_v01(&a, p.t, p.mu, 5, &DVector::from(v0), &DVector::from(v1));
        assert!((pt.v01 - dv01).abs() < 1e-8, "s = {}", pt.s);
    }
}
