//! Airy function of the first kind on `[-15, 15]`.
//!
//! Values come from a node table at spacing 1/4 built once per process:
//! the negative half is produced by Taylor-series marching of `y'' = x y`
//! away from the exact origin values `Ai(0) = 3^{-2/3}/Γ(2/3)`,
//! `Ai'(0) = -3^{-1/3}/Γ(1/3)`; the positive half is seeded at `x = 15.5`
//! from the large-`x` expansion (where it is accurate to machine precision)
//! and marched *downward*, the direction in which the recessive solution is
//! stable. Marching the positive axis upward instead would amplify any seed
//! error by `~e^{(2/3)(2x^{3/2})}` through contamination with the growing
//! solution. Point evaluations run the same Taylor recurrence from the
//! nearest node, at most 1/8 away.
//!
//! The downward march re-derives the origin values from the `x = 15.5` seed;
//! the table constructor checks that round trip to 5e-14 before serving any
//! values.

use std::sync::OnceLock;
use thiserror::Error;

/// `Ai(0)`.
pub const AI_ZERO: f64 = 0.355_028_053_887_817_2;
/// `Ai'(0)`.
pub const AI_PRIME_ZERO: f64 = -0.258_819_403_792_806_8;

/// Supported evaluation range.
pub const SUPPORT: f64 = 15.0;

const NODE_SPACING: f64 = 0.25;
const TABLE_EDGE: f64 = 15.5;
const NODE_COUNT: usize = 125; // -15.5 ..= 15.5
const ORIGIN_INDEX: usize = 62;
const TAYLOR_ORDER: usize = 30;

#[derive(Debug, Error)]
pub enum AiryError {
    #[error("s = {s} outside the supported range [-{SUPPORT}, {SUPPORT}]")]
    OutOfRange { s: f64 },
}

/// Large-argument expansion seed, DLMF 9.7 form with
/// `zeta = (2/3) x^{3/2}`; at `x = 15.5` the optimal truncation error is far
/// below f64 resolution.
fn asymptotic_seed(x: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * x.powf(1.5);
    let mut u = 1.0f64;
    let mut su = 1.0;
    let mut sv = 1.0;
    let mut sign = 1.0;
    let mut zp = 1.0;
    for k in 1..=12usize {
        let kf = k as f64;
        u *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf);
        let v = u * (6.0 * kf + 1.0) / (1.0 - 6.0 * kf);
        sign = -sign;
        zp *= zeta;
        su += sign * u / zp;
        sv += sign * v / zp;
    }
    let pref = (-zeta).exp() / (2.0 * std::f64::consts::PI.sqrt());
    (pref / x.powf(0.25) * su, -pref * x.powf(0.25) * sv)
}

fn table() -> &'static Vec<(f64, f64)> {
    static TABLE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut tab = vec![(0.0f64, 0.0f64); NODE_COUNT];
        tab[ORIGIN_INDEX] = (AI_ZERO, AI_PRIME_ZERO);
        // negative axis: march down from the origin (oscillatory, stable)
        for j in (0..ORIGIN_INDEX).rev() {
            let a = node_x(j + 1);
            let (y, yp) = tab[j + 1];
            tab[j] = taylor_step_eval(a, y, yp, -NODE_SPACING);
        }
        // positive axis: seed at the edge, march down toward the origin
        tab[NODE_COUNT - 1] = asymptotic_seed(TABLE_EDGE);
        for j in (ORIGIN_INDEX + 1..NODE_COUNT - 1).rev() {
            let a = node_x(j + 1);
            let (y, yp) = tab[j + 1];
            tab[j] = taylor_step_eval(a, y, yp, -NODE_SPACING);
        }
        // dual-route consistency: continue the downward march to the origin
        // and compare with the exact Gamma-function values
        let (y, yp) = tab[ORIGIN_INDEX + 1];
        let (y0, yp0) = taylor_step_eval(node_x(ORIGIN_INDEX + 1), y, yp, -NODE_SPACING);
        assert!(
            (y0 - AI_ZERO).abs() < 5e-14 && (yp0 - AI_PRIME_ZERO).abs() < 5e-14,
            "airy table self-check failed: {:e}, {:e}",
            (y0 - AI_ZERO).abs(),
            (yp0 - AI_PRIME_ZERO).abs()
        );
        tab
    })
}

fn node_x(j: usize) -> f64 {
    -TABLE_EDGE + j as f64 * NODE_SPACING
}

/// `(Ai(s), Ai'(s))` with absolute error below 1e-12 on the supported range.
pub fn airy(s: f64) -> Result<(f64, f64), AiryError> {
    if !(-SUPPORT..=SUPPORT).contains(&s) {
        return Err(AiryError::OutOfRange { s });
    }
    let j = ((s + TABLE_EDGE) / NODE_SPACING).round() as usize;
    let j = j.min(NODE_COUNT - 1);
    let a = node_x(j);
    let (y, yp) = table()[j];
    Ok(taylor_step_eval(a, y, yp, s - a))
}

/// One analytic-continuation step of `y'' = x y`: given `(y, y')` at `a`,
/// return them at `a + h` via the Taylor recurrence
/// `c_{m+2} = (a c_m + c_{m-1}) / ((m+1)(m+2))`.
fn taylor_step_eval(a: f64, y: f64, yp: f64, h: f64) -> (f64, f64) {
    let mut c = [0.0f64; TAYLOR_ORDER + 1];
    c[0] = y;
    c[1] = yp;
    for m in 0..TAYLOR_ORDER - 1 {
        let prev = if m == 0 { 0.0 } else { c[m - 1] };
        c[m + 2] = (a * c[m] + prev) / (((m + 1) * (m + 2)) as f64);
    }
    // Horner in h; the derivative series runs alongside
    let mut val = c[TAYLOR_ORDER];
    let mut der = c[TAYLOR_ORDER] * TAYLOR_ORDER as f64;
    for m in (1..TAYLOR_ORDER).rev() {
        val = val * h + c[m];
        der = der * h + c[m] * m as f64;
    }
    (val * h + c[0], der)
}

#[cfg(test)]
mod tests {
    use super::*;

    // Maclaurin-series oracle: Ai = Ai(0) f + Ai'(0) g, valid to ~1e-13
    // absolute for |x| <= 5 in f64.
    fn maclaurin(x: f64) -> (f64, f64) {
        let x3 = x * x * x;
        let (mut f, mut fp) = (1.0, 0.0);
        let mut tf = 1.0;
        let (mut g, mut gp) = (x, 1.0);
        let mut tg = x;
        for k in 0..60 {
            let kf = k as f64;
            tf *= x3 / ((3.0 * kf + 2.0) * (3.0 * kf + 3.0));
            f += tf;
            fp += tf * (3.0 * kf + 3.0) / x;
            tg *= x3 / ((3.0 * kf + 3.0) * (3.0 * kf + 4.0));
            g += tg;
            gp += tg * (3.0 * kf + 4.0) / x;
        }
        (
            AI_ZERO * f + AI_PRIME_ZERO * g,
            AI_ZERO * fp + AI_PRIME_ZERO * gp,
        )
    }

    // oscillatory-side asymptotic oracle for x <= -9 (DLMF 9.7.9/9.7.10)
    fn asymptotic_neg(x_abs: f64) -> (f64, f64) {
        let zeta = 2.0 / 3.0 * x_abs.powf(1.5);
        let mut u = vec![1.0f64];
        for k in 1..=25usize {
            let kf = k as f64;
            u.push(
                u[k - 1] * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
                    / ((2.0 * kf - 1.0) * 216.0 * kf),
            );
        }
        let v: Vec<f64> = u
            .iter()
            .enumerate()
            .map(|(k, &uk)| {
                if k == 0 {
                    1.0
                } else {
                    uk * (6.0 * k as f64 + 1.0) / (1.0 - 6.0 * k as f64)
                }
            })
            .collect();
        let (mut ce, mut se, mut co, mut so) = (0.0, 0.0, 0.0, 0.0);
        for k in 0..12 {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            ce += sign * u[2 * k] / zeta.powi(2 * k as i32);
            se += sign * u[2 * k + 1] / zeta.powi(2 * k as i32 + 1);
            co += sign * v[2 * k] / zeta.powi(2 * k as i32);
            so += sign * v[2 * k + 1] / zeta.powi(2 * k as i32 + 1);
        }
        let w = zeta - std::f64::consts::FRAC_PI_4;
        let sp = std::f64::consts::PI.sqrt();
        (
            (w.cos() * ce + w.sin() * se) / (sp * x_abs.powf(0.25)),
            (x_abs.powf(0.25) / sp) * (w.sin() * co - w.cos() * so),
        )
    }

    #[test]
    fn origin_values_are_exact() {
        let (ai, aip) = airy(0.0).unwrap();
        assert_eq!(ai, AI_ZERO);
        assert_eq!(aip, AI_PRIME_ZERO);
    }

    #[test]
    fn matches_maclaurin_oracle_on_central_range() {
        let mut x = -5.0f64;
        while x <= 5.0 {
            if x.abs() > 1e-9 {
                let (ai, aip) = airy(x).unwrap();
                let (oai, oaip) = maclaurin(x);
                assert!((ai - oai).abs() < 1e-12, "Ai({x}): {:e}", (ai - oai).abs());
                assert!((aip - oaip).abs() < 1e-12, "Ai'({x}): {:e}", (aip - oaip).abs());
            }
            x += 0.173;
        }
    }

    #[test]
    fn matches_asymptotic_oracle_on_negative_tail() {
        let mut x = -15.0;
        while x <= -9.0 {
            let (ai, aip) = airy(x).unwrap();
            let (oai, oaip) = asymptotic_neg(-x);
            assert!((ai - oai).abs() < 1e-12, "Ai({x}): {:e}", (ai - oai).abs());
            assert!((aip - oaip).abs() < 1e-12, "Ai'({x})");
            x += 0.311;
        }
    }

    #[test]
    fn matches_asymptotic_seed_on_positive_tail() {
        for x in [9.0, 10.6, 12.0, 13.9, 15.0] {
            let (ai, aip) = airy(x).unwrap();
            let (oai, oaip) = asymptotic_seed(x);
            assert!((ai - oai).abs() < 1e-12);
            assert!((aip - oaip).abs() < 1e-12);
            // relative agreement is what matters this far out
            assert!(((ai - oai) / oai).abs() < 1e-10, "rel at {x}");
            assert!(((aip - oaip) / oaip).abs() < 1e-10);
        }
    }

    #[test]
    fn frozen_reference_values() {
        // mpmath, 20 significant digits
        let refs = [
            (-15.0, 0.278_217_490_870_828_93, 0.272_374_204_308_642_02),
            (-12.0, -0.066_555_175_054_373_13, 1.023_110_453_367_970_7),
            (-5.0, 0.350_761_009_024_114_32, 0.327_192_818_554_443_14),
            (-2.5, -0.112_325_067_692_966_09, 0.678_852_734_264_794_36),
            (0.5, 0.231_693_606_480_833_49, -0.224_910_532_664_683_89),
            (2.5, 0.015_725_923_380_470_49, -0.026_250_881_035_903_23),
            (5.0, 1.083_444_281_360_744_2e-4, -2.474_138_908_684_624_8e-4),
            (9.0, 2.471_168_430_872_489_8e-9, -7.480_641_389_658_946_4e-9),
            (15.0, 2.164_962_520_737_992_3e-18, -8.420_567_954_017_772_8e-18),
        ];
        for (x, ai_ref, aip_ref) in refs {
            let (ai, aip) = airy(x).unwrap();
            assert!((ai - ai_ref).abs() < 1e-12, "Ai({x})");
            assert!((aip - aip_ref).abs() < 1e-12, "Ai'({x})");
        }
    }

    #[test]
    fn dual_method_cross_check_at_five() {
        // series continuation (the implementation's negative-to-positive
        // marching chain) against the direct Maclaurin sum
        let (ai, _) = airy(5.0).unwrap();
        let (oai, _) = maclaurin(5.0);
        assert!((ai - oai).abs() < 1e-12);
        assert!((ai - 1.0834e-4).abs() < 1e-8, "magnitude check");
    }

    #[test]
    fn out_of_range_is_rejected() {
        assert!(matches!(airy(15.2), Err(AiryError::OutOfRange { .. })));
        assert!(matches!(airy(-16.0), Err(AiryError::OutOfRange { .. })));
        assert!(airy(15.0).is_ok());
        assert!(airy(-15.0).is_ok());
    }

    #[test]
    fn derivative_consistent_with_value_differences() {
        for x in [-8.3, -3.1, 0.7, 4.2, 9.9] {
            let h = 1e-5;
            let (_, aip) = airy(x).unwrap();
            let (ap, _) = airy(x + h).unwrap();
            let (am, _) = airy(x - h).unwrap();
            let fd = (ap - am) / (2.0 * h);
            assert!((fd - aip).abs() < 1e-8, "x={x}");
        }
    }
}
