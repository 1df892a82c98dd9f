use gouy_core::cli::{default_oracle_battery, oracle_check};
use gouy_core::dynamics::{gouy_principal, inv_curvature, width};
use gouy_core::oracle::{
    closed_form_state, evolve_numeric, fit_gaussian_params, symmetric_grid, QuadratureConfig,
};
use gouy_core::{Error, UnitSystem, WavepacketSpec};
use std::f64::consts::PI;

#[test]
fn default_battery_agrees_to_1e_8() {
    let config = QuadratureConfig::default();
    for (spec, times) in default_oracle_battery() {
        let report = oracle_check(&spec, &times, &config).unwrap();
        assert!(report.passed());
        for row in report.rows {
            let e = row.l2_error.expect("battery avoids focal times");
            assert!(e <= 1e-8, "{spec:?} t={}: {e}", row.t);
        }
    }
}

#[test]
fn focal_time_is_flagged_not_fatal() {
    let spec = WavepacketSpec::natural(1.0, 1.0, 0.5).unwrap();
    let report = oracle_check(&spec, &[0.5, PI, 2.0], &QuadratureConfig::default()).unwrap();
    assert_eq!(report.rows.len(), 3);
    assert_eq!(report.rows[1].flag.as_deref(), Some("KernelSingular"));
    assert!(report.rows[0].l2_error.unwrap() < 1e-8);
    assert!(report.rows[2].l2_error.unwrap() < 1e-8);
    assert!(report.passed());
}

#[test]
fn doubling_panels_does_not_degrade() {
    let spec = WavepacketSpec::natural(1.0, 0.7, -1.0).unwrap();
    let base = QuadratureConfig::default();
    let fine = QuadratureConfig {
        panels: 2 * base.panels,
        ..base
    };
    let times = [0.3, 1.1, 2.6];
    let a = oracle_check(&spec, &times, &base).unwrap();
    let b = oracle_check(&spec, &times, &fine).unwrap();
    for (ra, rb) in a.rows.iter().zip(&b.rows) {
        let (ea, eb) = (ra.l2_error.unwrap(), rb.l2_error.unwrap());
        assert!(eb <= ea.max(1e-12) * 10.0, "{ea} -> {eb}");
    }
}

#[test]
fn fitted_parameters_recover_closed_forms() {
    let spec = WavepacketSpec::natural(1.0, 2.5, 1.0).unwrap();
    for t in [0.3, 1.1] {
        let xs = symmetric_grid(6.0 * width(&spec, t).unwrap(), 513);
        let psi = evolve_numeric(&spec, t, &xs, &QuadratureConfig::default()).unwrap();
        let fit = fit_gaussian_params(&psi, UnitSystem::natural()).unwrap();
        let b = width(&spec, t).unwrap();
        let u = inv_curvature(&spec, t).unwrap();
        assert!((fit.width - b).abs() / b < 1e-6);
        assert!((fit.inv_curvature - u).abs() / (1.0 + u.abs()) < 1e-6);
        let mu = gouy_principal(&spec, t).unwrap();
        let d = (fit.mu_principal - mu).rem_euclid(PI / 2.0);
        assert!(d.min(PI / 2.0 - d) < 1e-6, "{} vs {mu}", fit.mu_principal);
    }
}

#[test]
fn closed_form_is_normalised() {
    let spec = WavepacketSpec::natural(1.0, 0.3, -1.0).unwrap();
    let xs = symmetric_grid(30.0, 4001);
    for t in [0.0, 1.0, 5.0] {
        let n = closed_form_state(&spec, t, &xs).unwrap().norm_sq();
        assert!((n - 1.0).abs() < 1e-9, "{n}");
    }
}

#[test]
fn tight_cut_radius_is_reported() {
    // accepted by validation, but the initial amplitude at 6 widths is still ~1e-4
    let spec = WavepacketSpec::natural(1.0, 1.0, 0.0).unwrap();
    let config = QuadratureConfig {
        cut_radius_in_widths: 6.0,
        ..QuadratureConfig::default()
    };
    let err = evolve_numeric(&spec, 1.0, &[0.0], &config).unwrap_err();
    assert!(matches!(err, Error::TruncationTooTight { .. }));
}
