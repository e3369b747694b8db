//! Transfer-matrix direct scattering on the unit circle.
//!
//! The discrete scattering problem is propagated with
//!
//! ```text
//! v_{n+1} = Z(z, R_n) v_n,      Z(z, R) = [ z       R   ]
//!                                         [ conj(R) 1/z ]
//! ```
//!
//! starting from the free solution `v = (z^{n_min}, 0)` below the support.
//! Above the support the components carry `a(z) z^n` and `b(z) z^{-n}`; the
//! reflection coefficient is `r = b/a`. With `max |R_n| < 1` every factor has
//! `det Z = 1 - |R_n|^2 > 0`, which yields the exact identity
//! `|a|^2 - |b|^2 = prod_n (1 - |R_n|^2)` on `|z| = 1` (checked after every
//! scattering pass) and in particular `sup |r| < 1`.
//!
//! In time the reflection coefficient is evolved by the unimodular factor
//! `exp(i t (z - 1/z)^2)`, which reduces to `exp(-2it)` at `z = e^{-i pi/4}`.

use crate::lattice::LatticeState;
use num_complex::Complex64;
use thiserror::Error;

/// Identifier of the scattering convention baked into this module.
pub const CONVENTION_TAG: &str = "Z=[[z,R],[conj(R),1/z]];jost=(z^n,0);r=b/a";

#[derive(Debug, Error)]
pub enum ScatterError {
    #[error("non-defocusing input: max |R_n| = {max_abs} >= 1")]
    NonDefocusingInput { max_abs: f64 },
    #[error("unitarity violation at theta = {theta}: | |a|^2 - |b|^2 - prod | = {defect:e}")]
    UnitarityViolation { theta: f64, defect: f64 },
}

/// One-site transfer matrix `Z(z, R)`, row-major. `det Z = 1 - |R|^2`.
pub fn transfer_matrix(z: Complex64, r: Complex64) -> [[Complex64; 2]; 2] {
    [[z, r], [r.conj(), z.inv()]]
}

/// Jost connection coefficients `(a, b)` at `z = e^{i theta}`.
///
/// Propagates the scaled components `(A_n, B_n) = (v_1 z^{-n}, v_2 z^{n})`
/// through the window, so only unimodular phases enter and no large powers of
/// `z` are ever formed.
pub fn jost_coefficients(state: &LatticeState, theta: f64) -> (Complex64, Complex64) {
    let mut a = Complex64::new(1.0, 0.0);
    let mut b = Complex64::new(0.0, 0.0);
    for (k, r) in state.amplitudes().iter().enumerate() {
        if r.norm_sqr() == 0.0 {
            continue; // free site: A, B unchanged
        }
        let n = state.n_min() + k as i64;
        let phase = Complex64::from_polar(1.0, (2 * n + 1) as f64 * theta);
        let a_next = a + r * b * phase.conj();
        let b_next = b + r.conj() * a * phase;
        a = a_next;
        b = b_next;
    }
    (a, b)
}

/// Reflection coefficient `r(e^{i theta}) = b/a` for a single angle.
pub fn reflection_at(state: &LatticeState, theta: f64) -> Complex64 {
    let (a, b) = jost_coefficients(state, theta);
    b / a
}

/// `r(z)` sampled on a grid of the unit circle together with `a(z)`.
#[derive(Debug, Clone)]
pub struct ReflectionSamples {
    thetas: Vec<f64>,
    values: Vec<Complex64>,
    a_values: Vec<Complex64>,
    convention_tag: &'static str,
}

impl ReflectionSamples {
    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn a_values(&self) -> &[Complex64] {
        &self.a_values
    }

    pub fn convention_tag(&self) -> &str {
        self.convention_tag
    }

    pub fn len(&self) -> usize {
        self.thetas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.thetas.is_empty()
    }

    pub fn sup_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// CSV rows `theta,re_r,im_r,abs_r` under a comment naming the convention.
    pub fn write_csv<W: std::io::Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "# convention={}", self.convention_tag)?;
        writeln!(w, "theta,re_r,im_r,abs_r")?;
        for (theta, v) in self.thetas.iter().zip(&self.values) {
            writeln!(w, "{:.17e},{:.17e},{:.17e},{:.17e}", theta, v.re, v.im, v.norm())?;
        }
        Ok(())
    }
}

/// `count` uniform angles in `[0, 2*pi)`. Counts divisible by 8 place
/// `T_1 = e^{-i pi/4}` (theta = 7*pi/4) exactly on the grid.
pub fn uniform_thetas(count: usize) -> Vec<f64> {
    let step = std::f64::consts::TAU / count as f64;
    (0..count).map(|j| j as f64 * step).collect()
}

/// Direct scattering of compactly supported initial data on an angle grid.
pub fn scatter(state: &LatticeState, thetas: &[f64]) -> Result<ReflectionSamples, ScatterError> {
    let max_abs = state.max_abs();
    if max_abs >= 1.0 {
        return Err(ScatterError::NonDefocusingInput { max_abs });
    }
    let product: f64 = state
        .amplitudes()
        .iter()
        .map(|r| 1.0 - r.norm_sqr())
        .product();
    let mut values = Vec::with_capacity(thetas.len());
    let mut a_values = Vec::with_capacity(thetas.len());
    for &theta in thetas {
        let (a, b) = jost_coefficients(state, theta);
        let defect = (a.norm_sqr() - b.norm_sqr() - product).abs();
        if defect > 1e-10 {
            return Err(ScatterError::UnitarityViolation { theta, defect });
        }
        values.push(b / a);
        a_values.push(a);
    }
    Ok(ReflectionSamples {
        thetas: thetas.to_vec(),
        values,
        a_values,
        convention_tag: CONVENTION_TAG,
    })
}

/// Time-evolution factor of the reflection coefficient at `z`:
/// `exp(i t (z - 1/z)^2)`.
pub fn evolution_factor(z: Complex64, t: f64) -> Complex64 {
    let w = z - z.inv();
    (Complex64::new(0.0, t) * w * w).exp()
}

/// Evolve sampled reflection data to time `t >= 0` by pointwise multiplication
/// with the unimodular factor; `|r|` is unchanged at every sample.
pub fn evolve_reflection(samples: &ReflectionSamples, t: f64) -> ReflectionSamples {
    let values = samples
        .thetas
        .iter()
        .zip(&samples.values)
        .map(|(&theta, v)| v * evolution_factor(Complex64::from_polar(1.0, theta), t))
        .collect();
    ReflectionSamples {
        thetas: samples.thetas.clone(),
        values,
        a_values: samples.a_values.clone(),
        convention_tag: samples.convention_tag,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64 as C;
    use rand::{Rng, SeedableRng};
    use std::f64::consts::{FRAC_PI_4, PI, TAU};

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    fn random_state(len: usize, seed: u64) -> LatticeState {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let amps = (0..len)
            .map(|_| C::from_polar(rng.gen_range(0.0..0.6), rng.gen_range(0.0..TAU)))
            .collect();
        LatticeState::new(-(len as i64) / 2, amps, 0.0).unwrap()
    }

    #[test]
    fn transfer_matrix_free_site_is_diagonal() {
        let z = C::from_polar(1.0, 1.234);
        let m = transfer_matrix(z, c(0.0, 0.0));
        assert_eq!(m[0][0], z);
        assert!((m[1][1] - z.inv()).norm() < 1e-16);
        assert_eq!(m[0][1], c(0.0, 0.0));
        assert_eq!(m[1][0], c(0.0, 0.0));
    }

    #[test]
    fn transfer_matrix_determinant() {
        for theta in [0.0, 0.7, 2.9, -1.3] {
            let m = transfer_matrix(C::from_polar(1.0, theta), c(0.5, 0.0));
            let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
            assert!((det - c(0.75, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn transfer_matrix_explicit_entries() {
        let z = C::from_polar(1.0, -FRAC_PI_4);
        let m = transfer_matrix(z, c(0.0, 0.3));
        assert!((m[0][0] - z).norm() < 1e-16);
        assert!((m[0][1] - c(0.0, 0.3)).norm() < 1e-16);
        assert!((m[1][0] - c(0.0, -0.3)).norm() < 1e-16);
        assert!((m[1][1] - C::from_polar(1.0, FRAC_PI_4)).norm() < 1e-15);
    }

    #[test]
    fn zero_data_scatters_trivially() {
        let s = LatticeState::new(-4, vec![c(0.0, 0.0); 9], 0.0).unwrap();
        let samples = scatter(&s, &uniform_thetas(64)).unwrap();
        assert!(samples.values().iter().all(|r| r.norm() == 0.0));
        assert!(samples
            .a_values()
            .iter()
            .all(|a| (a - c(1.0, 0.0)).norm() == 0.0));
    }

    #[test]
    fn single_site_closed_form() {
        // R_0 = c  =>  a = 1, b = conj(c) z, r = conj(c) z
        let amp = c(0.25, 0.35);
        let s = LatticeState::single_site(amp, 0).unwrap();
        let thetas = uniform_thetas(256);
        let samples = scatter(&s, &thetas).unwrap();
        for (&theta, r) in thetas.iter().zip(samples.values()) {
            let exact = amp.conj() * C::from_polar(1.0, theta);
            assert!((r - exact).norm() < 1e-14);
        }
    }

    #[test]
    fn single_site_at_one_picks_up_z_squared() {
        // shift covariance against the closed form: R_1 = c  =>  r = conj(c) z^3
        let amp = c(0.4, -0.1);
        let s = LatticeState::single_site(amp, 1).unwrap();
        for theta in uniform_thetas(64) {
            let r = reflection_at(&s, theta);
            let exact = amp.conj() * C::from_polar(1.0, 3.0 * theta);
            assert!((r - exact).norm() < 1e-14);
        }
    }

    #[test]
    fn shift_covariance_on_random_data() {
        let s = random_state(6, 7);
        let shifted = LatticeState::new(s.n_min() + 1, s.amplitudes().to_vec(), 0.0).unwrap();
        for theta in [0.3, 1.1, 2.7, 4.9] {
            let z2 = C::from_polar(1.0, 2.0 * theta);
            let lhs = reflection_at(&shifted, theta);
            let rhs = z2 * reflection_at(&s, theta);
            assert!((lhs - rhs).norm() < 1e-13);
        }
    }

    #[test]
    fn two_site_matches_hand_product() {
        // v_2 = Z(z,R_1) Z(z,R_0) (1,0)^T gives
        //   a = 1 + conj(R_0) R_1 z^{-2},  b = conj(R_1) z^3 + conj(R_0) z
        let (r0, r1) = (c(0.2, 0.0), c(0.0, 0.1));
        let s = LatticeState::new(0, vec![r0, r1], 0.0).unwrap();
        for theta in uniform_thetas(128) {
            let z = C::from_polar(1.0, theta);
            let a = c(1.0, 0.0) + r0.conj() * r1 / (z * z);
            let b = r1.conj() * z * z * z + r0.conj() * z;
            let exact = b / a;
            let r = reflection_at(&s, theta);
            assert!((r - exact).norm() < 1e-12, "theta={theta}");
            // odd symmetry at the same angle
            let r_neg = reflection_at(&s, theta + PI);
            assert!((r_neg + r).norm() < 1e-12);
        }
    }

    #[test]
    fn unitarity_and_bound_on_random_data() {
        let s = random_state(10, 42);
        let product: f64 = s.amplitudes().iter().map(|r| 1.0 - r.norm_sqr()).product();
        let samples = scatter(&s, &uniform_thetas(128)).unwrap();
        assert!(samples.sup_abs() < 1.0);
        for (k, a) in samples.a_values().iter().enumerate() {
            let b = samples.values()[k] * a;
            let defect = (a.norm_sqr() - b.norm_sqr() - product).abs();
            assert!(defect < 1e-12, "defect {defect:e}");
        }
    }

    #[test]
    fn odd_symmetry_on_random_data() {
        let s = random_state(10, 3);
        let thetas = uniform_thetas(64); // even count: theta + pi stays on the grid
        let samples = scatter(&s, &thetas).unwrap();
        let half = thetas.len() / 2;
        for j in 0..half {
            let r = samples.values()[j];
            let r_opp = samples.values()[j + half];
            assert!((r + r_opp).norm() < 1e-10);
        }
    }

    #[test]
    fn evolution_factor_values() {
        let t1 = C::from_polar(1.0, -FRAC_PI_4);
        for t in [0.0, 0.8, 5.0] {
            let f = evolution_factor(t1, t);
            assert!((f - C::from_polar(1.0, -2.0 * t)).norm() < 1e-12);
        }
        assert!((evolution_factor(c(1.0, 0.0), 3.0) - c(1.0, 0.0)).norm() < 1e-14);
        assert!((evolution_factor(c(-1.0, 0.0), 3.0) - c(1.0, 0.0)).norm() < 1e-14);
        // z = i: (z - 1/z)^2 = (2i)^2 = -4
        assert!((evolution_factor(c(0.0, 1.0), 1.0) - C::from_polar(1.0, -4.0)).norm() < 1e-12);
    }

    #[test]
    fn evolution_preserves_modulus() {
        let s = random_state(8, 11);
        let samples = scatter(&s, &uniform_thetas(64)).unwrap();
        let evolved = evolve_reflection(&samples, 17.3);
        for (before, after) in samples.values().iter().zip(evolved.values()) {
            assert!((before.norm() - after.norm()).abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_non_defocusing_input() {
        // bypass LatticeState's own guard is impossible; check the error path
        // through a state at the regime edge via direct construction failure
        assert!(LatticeState::new(0, vec![c(0.0, 1.2)], 0.0).is_err());
    }

    #[test]
    fn csv_mentions_convention() {
        let s = LatticeState::single_site(c(0.2, 0.0), 0).unwrap();
        let samples = scatter(&s, &uniform_thetas(8)).unwrap();
        let mut buf = Vec::new();
        samples.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with(&format!("# convention={CONVENTION_TAG}")));
        assert_eq!(text.lines().count(), 2 + 8);
    }
}
