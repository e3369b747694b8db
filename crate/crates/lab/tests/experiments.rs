//! Harness-level behavior: configuration round trips, zero-data degeneracy,
//! the calibration decision rule, self-convergence of the simulate driver,
//! and the lattice reflection symmetry seen through the harness.

use idnls_core::painleve::MatchingSign;
use idnls_lab::config::{CalibrationState, ExperimentConfig, InitialKind};
use idnls_lab::experiments::{
    calibrate, compare_region_b, front_indices, region_scan, sign_residuals, simulate,
    window_max_abs,
};
use idnls_lab::LabError;
use num_complex::Complex64;

fn short_config(kind: InitialKind, amplitude: f64, times: Vec<f64>) -> ExperimentConfig {
    let mut config = ExperimentConfig::default();
    config.initial.kind = kind;
    config.initial.amplitude = amplitude;
    config.evolution.times = times;
    config
}

#[test]
fn config_round_trips_through_serialize_parse() {
    let mut config = ExperimentConfig::default();
    config.initial.kind = InitialKind::Sech;
    config.initial.amplitude = 0.4;
    config.evolution.times = vec![10.0, 20.0, 50.0];
    config.checks.magnitude_ratio = 0.2;
    let text = config.to_toml().unwrap();
    let back: ExperimentConfig = toml::from_str(&text).unwrap();
    assert_eq!(config, back);
    assert_eq!(config.hash(), back.hash());

    // a minimal file relies on defaults for everything else
    let minimal: ExperimentConfig = toml::from_str("[initial]\namplitude = 0.1\n").unwrap();
    assert_eq!(minimal.initial.amplitude, 0.1);
    assert_eq!(minimal.evolution.dt, 5e-3);
}

#[test]
fn config_validation_rejects_bad_values() {
    let mut config = ExperimentConfig::default();
    config.initial.amplitude = 1.0;
    assert!(config.validate().is_err());
    config.initial.amplitude = 0.3;
    config.evolution.times = vec![10.0, 10.0];
    assert!(config.validate().is_err());
    config.evolution.times = vec![10.0, 5.0];
    assert!(config.validate().is_err());
    config.evolution.times = vec![10.0];
    config.evolution.padding_factor = 1.5;
    assert!(config.validate().is_err());
}

#[test]
fn zero_data_degenerates_gracefully() {
    let config = short_config(InitialKind::SingleSite, 0.0, vec![3.0, 6.0]);
    let run = simulate(&config).unwrap();
    assert!(run.snapshots.iter().all(|s| s.max_abs() == 0.0));

    let cmp = compare_region_b(&config, &run, MatchingSign::Minus).unwrap();
    assert!(cmp.passed);
    assert!(cmp.rows.iter().all(|r| r.sim.norm() == 0.0 && r.pred.norm() == 0.0));

    let scan = region_scan(&config, &run).unwrap();
    assert!(scan.passed);
    assert!(scan.a_fit.is_none());

    // calibration cannot distinguish the signs on zero data
    match calibrate(&config, &run) {
        Err(LabError::InconclusiveCalibration { ratio, .. }) => {
            assert!((ratio - 1.0).abs() < 1e-12)
        }
        other => panic!("expected inconclusive calibration, got {other:?}"),
    }
}

#[test]
fn sign_residuals_close_the_loop_on_synthetic_data() {
    let predicted: Vec<Complex64> = (0..24)
        .map(|k| Complex64::from_polar(0.01 + 0.001 * k as f64, 0.3 * k as f64))
        .collect();
    // observations generated with sigma = +1 pick +1
    let (plus, minus) = sign_residuals(&predicted, &predicted);
    assert_eq!(plus, 0.0);
    assert!(minus > 0.0);
    // observations generated with sigma = -1 pick -1
    let negated: Vec<Complex64> = predicted.iter().map(|p| -p).collect();
    let (plus, minus) = sign_residuals(&negated, &predicted);
    assert!(plus > minus && minus == 0.0);
}

#[test]
fn calibration_is_decisive_on_small_amplitude_data() {
    let config = short_config(InitialKind::SingleSite, 0.05, vec![30.0]);
    let run = simulate(&config).unwrap();
    let outcome = calibrate(&config, &run).unwrap();
    assert_eq!(outcome.sigma, -1, "matching sign under this convention");
    assert!(outcome.ratio >= 3.0, "separation {}", outcome.ratio);
    assert!((outcome.kappa + 0.05).abs() < 1e-6, "kappa {}", outcome.kappa);
}

#[test]
fn calibration_refuses_large_amplitudes() {
    let config = short_config(InitialKind::SingleSite, 0.3, vec![20.0]);
    let run = simulate(&config).unwrap();
    assert!(matches!(
        calibrate(&config, &run),
        Err(LabError::Config(_))
    ));
}

#[test]
fn simulate_self_converges_under_dt_halving() {
    // t = 50, amplitude 0.3: halving dt changes the snapshot by < 1e-8
    let mut config = short_config(InitialKind::SingleSite, 0.3, vec![50.0]);
    let coarse = simulate(&config).unwrap();
    config.evolution.dt = 2.5e-3;
    let fine = simulate(&config).unwrap();
    let a = coarse.last();
    let b = fine.last();
    let mut worst = 0.0f64;
    for n in a.n_min()..=a.n_max() {
        worst = worst.max((a.amplitude(n) - b.amplitude(n)).norm());
    }
    assert!(worst < 1e-8, "dt-halving shift {worst:e}");
}

#[test]
fn reflected_initial_data_mirrors_snapshots() {
    let mut config = short_config(InitialKind::ThreeSite, 0.3, vec![15.0]);
    config.initial.offset = 4;
    let run = simulate(&config).unwrap();
    config.initial.offset = -4;
    let mirrored = simulate(&config).unwrap();
    let a = run.last();
    let b = mirrored.last();
    for n in a.n_min()..=a.n_max() {
        let d = (a.amplitude(n) - b.amplitude(-n)).norm();
        assert!(d < 1e-10, "mirror mismatch at n={n}: {d:e}");
    }
}

#[test]
fn region_scan_is_deterministic() {
    let config = short_config(InitialKind::SingleSite, 0.2, vec![6.0, 8.0, 10.0, 12.0, 14.0]);
    let run1 = simulate(&config).unwrap();
    let run2 = simulate(&config).unwrap();
    let scan1 = region_scan(&config, &run1).unwrap();
    let scan2 = region_scan(&config, &run2).unwrap();
    for (x, y) in scan1.a_rows.iter().zip(&scan2.a_rows) {
        assert_eq!(x.value, y.value);
    }
    for (x, y) in scan1.c_rows.iter().zip(&scan2.c_rows) {
        assert_eq!(x.value, y.value);
    }
}

#[test]
fn front_indices_preserve_parity() {
    let times = [100.0, 122.0, 149.5, 181.0, 221.25];
    let indices = front_indices(&times);
    assert_eq!(indices[0], 200);
    let parity = indices[0].rem_euclid(2);
    for (&n, &t) in indices.iter().zip(&times) {
        assert_eq!(n.rem_euclid(2), parity);
        assert!((n as f64 - 2.0 * t).abs() <= 1.0 + 1e-12);
    }
}

#[test]
fn window_max_takes_the_local_envelope() {
    let amps = vec![
        Complex64::new(0.1, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(-0.3, 0.0),
        Complex64::new(0.05, 0.0),
        Complex64::new(0.0, 0.2),
    ];
    let state = idnls_core::lattice::LatticeState::new(10, amps, 0.0).unwrap();
    assert_eq!(window_max_abs(&state, 12, 2), 0.3);
    assert_eq!(window_max_abs(&state, 14, 0), 0.2);
    // outside the window everything is zero
    assert_eq!(window_max_abs(&state, 100, 3), 0.0);
}

#[test]
fn calibration_state_round_trips_beside_config() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("lab.toml");
    let state = CalibrationState {
        sigma: -1,
        kappa: -0.05,
        residual_plus: 1.5e-3,
        residual_minus: 1.1e-4,
        config_hash: "deadbeefdeadbeef".into(),
    };
    let path = CalibrationState::path_beside(&config_path);
    assert_eq!(path.file_name().unwrap(), "lab.calibration.toml");
    state.save(&path).unwrap();
    let back = CalibrationState::load(&path).unwrap();
    assert_eq!(state, back);
    assert_eq!(back.sign().unwrap(), MatchingSign::Minus);
}
