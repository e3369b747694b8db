//! Property tests for the structural invariants of the scattering map, the
//! front-formula algebra, and the lattice right-hand side.

use idnls_core::asymptotics::{time_shift, RegionBInputs};
use idnls_core::lattice::{conserved_functional, idnls_rhs, LatticeState};
use idnls_core::painleve::StokesData;
use idnls_core::phase::{classify_region, RegionConstants};
use idnls_core::scattering::{jost_coefficients, reflection_at, scatter, uniform_thetas};
use idnls_core::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;

fn small_amplitude() -> impl Strategy<Value = Complex64> {
    (0.0..0.7f64, 0.0..(2.0 * PI)).prop_map(|(r, arg)| Complex64::from_polar(r, arg))
}

fn small_state() -> impl Strategy<Value = LatticeState> {
    (
        prop::collection::vec(small_amplitude(), 1..9),
        -6i64..6i64,
    )
        .prop_map(|(amps, n_min)| LatticeState::new(n_min, amps, 0.0).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn reflection_is_odd_and_contractive(state in small_state(), theta in 0.0..PI) {
        let r = reflection_at(&state, theta);
        let r_opposite = reflection_at(&state, theta + PI);
        prop_assert!((r + r_opposite).norm() < 1e-10);
        prop_assert!(r.norm() < 1.0);
    }

    #[test]
    fn jost_coefficients_satisfy_unitarity(state in small_state(), theta in 0.0..(2.0 * PI)) {
        let (a, b) = jost_coefficients(&state, theta);
        let product: f64 = state.amplitudes().iter().map(|r| 1.0 - r.norm_sqr()).product();
        prop_assert!((a.norm_sqr() - b.norm_sqr() - product).abs() < 1e-10);
    }

    #[test]
    fn gauge_rotation_leaves_reflection_modulus(state in small_state(), phase in 0.0..(2.0 * PI)) {
        let rotated = state.gauge_rotated(phase);
        let samples = scatter(&state, &uniform_thetas(16)).unwrap();
        let rotated_samples = scatter(&rotated, &uniform_thetas(16)).unwrap();
        for (u, v) in samples.values().iter().zip(rotated_samples.values()) {
            prop_assert!((u.norm() - v.norm()).abs() < 1e-12);
        }
    }

    #[test]
    fn shifting_the_potential_multiplies_reflection_by_z_squared(
        state in small_state(),
        theta in 0.0..(2.0 * PI),
    ) {
        let shifted = LatticeState::new(state.n_min() + 1, state.amplitudes().to_vec(), 0.0).unwrap();
        let z2 = Complex64::from_polar(1.0, 2.0 * theta);
        let lhs = reflection_at(&shifted, theta);
        let rhs = z2 * reflection_at(&state, theta);
        prop_assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn rhs_is_gauge_equivariant(state in small_state(), phase in 0.0..(2.0 * PI)) {
        let rot = Complex64::from_polar(1.0, phase);
        let plain = idnls_rhs(&state);
        let rotated = idnls_rhs(&state.gauge_rotated(phase));
        for (d, e) in plain.iter().zip(&rotated) {
            prop_assert!((d * rot - e).norm() < 1e-14);
        }
    }

    #[test]
    fn conserved_functional_is_negative_and_gauge_invariant(
        state in small_state(),
        phase in 0.0..(2.0 * PI),
    ) {
        let h = conserved_functional(&state).unwrap();
        prop_assert!(h <= 0.0);
        let h_rot = conserved_functional(&state.gauge_rotated(phase)).unwrap();
        prop_assert!((h - h_rot).abs() < 1e-12 * (1.0 + h.abs()));
    }

    #[test]
    fn time_shift_output_makes_reflection_imaginary(
        modulus in 0.001..0.9f64,
        arg in -PI..PI,
    ) {
        let r = Complex64::from_polar(modulus, arg);
        let t0 = time_shift(r).unwrap();
        prop_assert!((0.0..std::f64::consts::FRAC_PI_2).contains(&t0));
        let shifted = r * Complex64::from_polar(1.0, -2.0 * t0);
        prop_assert!(shifted.re.abs() < 1e-12 * modulus);
    }

    #[test]
    fn q_prime_matches_its_alpha_route(
        t in 20.0..2000.0f64,
        dn in -20i64..20i64,
        modulus in 0.01..0.9f64,
        arg in -PI..PI,
    ) {
        let n = (2.0 * t).round() as i64 + dn;
        let r = Complex64::from_polar(modulus, arg);
        let inputs = RegionBInputs::new(n, t, r).unwrap();
        let tp = inputs.t_shifted;
        let alt = inputs.alpha_prime / tp.cbrt() * (n as f64 - 2.0 * tp) / 4.0;
        let scale = inputs.q_prime.abs().max(1e-12);
        prop_assert!((alt - inputs.q_prime).abs() / scale < 1e-12);
    }

    #[test]
    fn stokes_front_data_always_satisfies_constraint(kappa in -0.95..0.95f64) {
        let s = StokesData::front(Complex64::new(0.0, kappa)).unwrap();
        let defect = (s.r - (s.p + s.q + s.p * s.q * s.r)).norm();
        prop_assert!(defect == 0.0);
    }

    #[test]
    fn region_classification_is_reflection_symmetric(
        n in -3000i64..3000,
        t in 1.0..500.0f64,
    ) {
        let k = RegionConstants::default();
        prop_assert_eq!(classify_region(n, t, &k), classify_region(-n, t, &k));
    }

    #[test]
    fn lattice_csv_round_trips(state in small_state()) {
        let mut buf = Vec::new();
        state.write_csv(&mut buf).unwrap();
        let back = LatticeState::read_csv(&buf[..]).unwrap();
        prop_assert_eq!(back.n_min(), state.n_min());
        prop_assert_eq!(back.len(), state.len());
        for (a, b) in state.amplitudes().iter().zip(back.amplitudes()) {
            prop_assert!((a - b).norm() < 1e-16);
        }
    }
}
