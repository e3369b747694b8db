//! Long-time predictions and decay-law checks.
//!
//! Near the wavefront (Region B, `|n - 2t| < M t^{1/3}`) the lattice
//! amplitude follows the Painlevé II law
//!
//! ```text
//! R_n(t) = e^{2p' - i pi/4} alpha' (3t')^{-1/3} u(4q'/3^{1/3}) + O(t'^{-2/3})
//! ```
//!
//! with `t' = t - t_0`, `p' = i(-4t' + pi n)/4`,
//! `alpha' = [12t'/(6t' - n)]^{1/3}`,
//! `q' = -2^{-4/3} 3^{1/3} (6t' - n)^{-1/3} (2t' - n)`, where `u` is the
//! Ablowitz–Segur Painlevé II solution for Stokes data
//! `(r(T_1), -r(T_1), 0)` evaluated on the time-shifted reflection value, and
//! the time shift `t_0` is the smallest value in `[0, pi/2)` that makes
//! `r(T_1) e^{-2i t_0}` purely imaginary.
//!
//! In the interior cone (Region A) only the decay order `t^{-1/2}` is
//! checked; the leading coefficients live in the companion stationary-phase
//! theory and are not computed here. Beyond the front (Region C) the solution
//! decays faster than any negative power of `n`, exponentially for finitely
//! supported data; both statements are checked empirically through fits.

use crate::lattice::{evolve, EvolveOptions, LatticeError, LatticeState};
use crate::painleve::{solve_p2, P2Config, P2Error, Painleve2Solution, StokesData};
use crate::phase::{classify_region, Region, RegionConstants};
use num_complex::Complex64;
use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::{Arc, Mutex};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AsymError {
    #[error("zero reflection coefficient: the front prediction degenerates to 0")]
    ZeroReflection,
    #[error("(n, t) = ({n}, {t}) is in region {region}, not in region B")]
    OutsideRegionB { n: i64, t: f64, region: Region },
    #[error("shifted time t' = {t_shifted} is not positive")]
    NonPositiveShiftedTime { t_shifted: f64 },
    #[error(transparent)]
    Painleve(#[from] P2Error),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("degenerate fit: {0}")]
    DegenerateFit(String),
    #[error("need at least {need} samples, got {got}")]
    NotEnoughSamples { got: usize, need: usize },
}

/// Smallest `t_0` in `[0, pi/2)` with `arg r(T_1) - 2 t_0 - pi/2` an integer
/// multiple of `pi`; then `r(T_1) e^{-2i t_0}` is purely imaginary.
pub fn time_shift(r_t1: Complex64) -> Result<f64, AsymError> {
    if r_t1.norm() == 0.0 {
        return Err(AsymError::ZeroReflection);
    }
    let t0 = (r_t1.arg() - FRAC_PI_2).rem_euclid(PI) / 2.0;
    // a value within rounding of the excluded endpoint pi/2 is the t0 = 0
    // case seen from the other side of the congruence
    Ok(if t0 >= FRAC_PI_2 - 1e-13 { 0.0 } else { t0 })
}

/// The scalars entering the front formula for one `(n, t)` pair.
#[derive(Debug, Clone, Copy)]
pub struct RegionBInputs {
    pub n: i64,
    pub t: f64,
    /// Time shift `t_0`.
    pub t0: f64,
    /// Reflection value at `T_1` before the shift.
    pub r_t1: Complex64,
    /// `t' = t - t_0`.
    pub t_shifted: f64,
    /// `p' = i(-4t' + pi n)/4`.
    pub p_prime: Complex64,
    /// `alpha' = [12 t'/(6t' - n)]^{1/3}`.
    pub alpha_prime: f64,
    /// `q' = -2^{-4/3} 3^{1/3} (6t' - n)^{-1/3} (2t' - n)`.
    pub q_prime: f64,
    /// `r(T_1) e^{-2i t_0} = i kappa` with `kappa` real.
    pub kappa: f64,
}

impl RegionBInputs {
    pub fn new(n: i64, t: f64, r_t1: Complex64) -> Result<Self, AsymError> {
        let t0 = time_shift(r_t1)?;
        let t_shifted = t - t0;
        if t_shifted <= 0.0 {
            return Err(AsymError::NonPositiveShiftedTime { t_shifted });
        }
        let nf = n as f64;
        let p_prime = Complex64::new(0.0, 0.25 * (-4.0 * t_shifted + PI * nf));
        let alpha_prime = (12.0 * t_shifted / (6.0 * t_shifted - nf)).cbrt();
        let q_prime =
            -(2.0f64.powf(-4.0 / 3.0)) * 3.0f64.cbrt() / (6.0 * t_shifted - nf).cbrt()
                * (2.0 * t_shifted - nf);
        let shifted = r_t1 * Complex64::from_polar(1.0, -2.0 * t0);
        debug_assert!(shifted.re.abs() <= 1e-12 * shifted.norm());
        Ok(Self {
            n,
            t,
            t0,
            r_t1,
            t_shifted,
            p_prime,
            alpha_prime,
            q_prime,
            kappa: shifted.im,
        })
    }

    /// Argument of the Painlevé function in the front formula,
    /// `4 q' / 3^{1/3}`.
    pub fn painleve_argument(&self) -> f64 {
        4.0 * self.q_prime / 3.0f64.cbrt()
    }
}

/// A predicted amplitude with its provenance.
#[derive(Debug, Clone, Copy)]
pub struct Prediction {
    pub value: Complex64,
    pub region: Region,
    /// Exponent of the error term in `t'`: -2/3 in region B.
    pub claimed_error_order: f64,
}

/// Painlevé solutions keyed by `kappa`, shared across a prediction sweep.
#[derive(Debug)]
pub struct P2Cache {
    config: P2Config,
    solutions: Mutex<HashMap<u64, Arc<Painleve2Solution>>>,
}

impl P2Cache {
    pub fn new(config: P2Config) -> Self {
        Self {
            config,
            solutions: Mutex::new(HashMap::new()),
        }
    }

    pub fn config(&self) -> &P2Config {
        &self.config
    }

    /// The Ablowitz–Segur solution for Stokes data `(i kappa, -i kappa, 0)`.
    pub fn solution(&self, kappa: f64) -> Result<Arc<Painleve2Solution>, P2Error> {
        let mut map = self.solutions.lock().unwrap();
        if let Some(sol) = map.get(&kappa.to_bits()) {
            return Ok(Arc::clone(sol));
        }
        let stokes = StokesData::front(Complex64::new(0.0, kappa))?;
        let sol = Arc::new(solve_p2(&stokes, &self.config)?);
        map.insert(kappa.to_bits(), Arc::clone(&sol));
        Ok(sol)
    }
}

/// Evaluate the front formula at `(n, t)` for reflection value `r_t1`.
///
/// `|value|` depends on the phase of `r_t1` only through the time shift; a
/// zero reflection value short-circuits to the zero prediction.
pub fn region_b_predict(
    n: i64,
    t: f64,
    r_t1: Complex64,
    cache: &P2Cache,
    constants: &RegionConstants,
) -> Result<Prediction, AsymError> {
    let region = classify_region(n, t, constants);
    if region != Region::B {
        return Err(AsymError::OutsideRegionB { n, t, region });
    }
    if r_t1.norm() == 0.0 {
        return Ok(Prediction {
            value: Complex64::new(0.0, 0.0),
            region,
            claimed_error_order: -2.0 / 3.0,
        });
    }
    let inputs = RegionBInputs::new(n, t, r_t1)?;
    let sol = cache.solution(inputs.kappa)?;
    let u = sol.eval(inputs.painleve_argument())?;
    let phase = (2.0 * inputs.p_prime - Complex64::new(0.0, PI / 4.0)).exp();
    let value = phase * inputs.alpha_prime / (3.0 * inputs.t_shifted).cbrt() * u;
    Ok(Prediction {
        value,
        region,
        claimed_error_order: -2.0 / 3.0,
    })
}

/// Least-squares slope with its standard error.
#[derive(Debug, Clone, Copy)]
pub struct FitResult {
    pub exponent: f64,
    pub stderr: f64,
}

/// Ordinary least-squares slope of `ys` against `xs` with its standard error.
pub fn fit_line(xs: &[f64], ys: &[f64]) -> FitResult {
    let n = xs.len() as f64;
    let xbar = xs.iter().sum::<f64>() / n;
    let ybar = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - xbar) * (x - xbar)).sum();
    let sxy: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (x - xbar) * (y - ybar))
        .sum();
    let slope = sxy / sxx;
    let intercept = ybar - slope * xbar;
    let ss_res: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum();
    let dof = (xs.len().max(3) - 2) as f64;
    FitResult {
        exponent: slope,
        stderr: (ss_res / dof / sxx).sqrt(),
    }
}

/// Fit `log |R| = c + exponent * log t` to samples `(t, |R|)`.
pub fn fit_decay_exponent(samples: &[(f64, f64)]) -> Result<FitResult, AsymError> {
    if samples.len() < 5 {
        return Err(AsymError::NotEnoughSamples {
            got: samples.len(),
            need: 5,
        });
    }
    for pair in samples.windows(2) {
        if pair[1].0 <= pair[0].0 {
            return Err(AsymError::DegenerateFit(format!(
                "times not increasing at t = {}",
                pair[1].0
            )));
        }
    }
    if let Some((t, _)) = samples.iter().find(|(_, v)| *v <= 0.0) {
        return Err(AsymError::DegenerateFit(format!(
            "non-positive sample at t = {t}"
        )));
    }
    let xs: Vec<f64> = samples.iter().map(|(t, _)| t.ln()).collect();
    let ys: Vec<f64> = samples.iter().map(|(_, v)| v.ln()).collect();
    Ok(fit_line(&xs, &ys))
}

/// Beyond-the-front decay report at a fixed time.
#[derive(Debug, Clone)]
pub struct RegionCReport {
    /// `(n, |R_n(t)|)` at the probed indices.
    pub rows: Vec<(i64, f64)>,
    /// `sup_n |R_n(t)| n^j`.
    pub sup_weighted: f64,
    pub j: u32,
    /// Slope of `log |R_n|` vs `n` (all probed values positive), so the
    /// per-site decay factor is `rho = e^{slope}`.
    pub rho_fit: Option<FitResult>,
    pub rho: Option<f64>,
}

/// Evolve `initial` to time `t` and probe `|R_n(t)|` at `n_values`, which
/// should all lie beyond the front (`n > (2 + V0) t`). Reports the
/// `n^{-j}`-weighted supremum and, when every probe is positive (compactly
/// supported data), a log-linear decay fit in `n`.
pub fn region_c_check(
    initial: &LatticeState,
    t: f64,
    n_values: &[i64],
    j: u32,
    opts: &EvolveOptions,
) -> Result<RegionCReport, AsymError> {
    let span = (t - initial.t()).max(0.0);
    let max_abs_n = n_values.iter().map(|n| n.unsigned_abs()).max().unwrap_or(0) as i64;
    let base_pad = (2.5 * span).ceil() as i64 + 40;
    let needed_right = max_abs_n + 10 - initial.n_max();
    let needed_left = max_abs_n + 10 + initial.n_min();
    let pad = base_pad.max(needed_right).max(needed_left).max(0) as usize;
    let (state, _) = evolve(&initial.padded(pad), t, opts)?;

    let rows: Vec<(i64, f64)> = n_values
        .iter()
        .map(|&n| (n, state.amplitude(n).norm()))
        .collect();
    let sup_weighted = rows
        .iter()
        .map(|(n, v)| v * (n.unsigned_abs() as f64).powi(j as i32))
        .fold(0.0, f64::max);
    let (rho_fit, rho) = if rows.len() >= 3 && rows.iter().all(|(_, v)| *v > 0.0) {
        let xs: Vec<f64> = rows.iter().map(|(n, _)| *n as f64).collect();
        let ys: Vec<f64> = rows.iter().map(|(_, v)| v.ln()).collect();
        let fit = fit_line(&xs, &ys);
        (Some(fit), Some(fit.exponent.exp()))
    } else {
        (None, None)
    };
    Ok(RegionCReport {
        rows,
        sup_weighted,
        j,
        rho_fit,
        rho,
    })
}
