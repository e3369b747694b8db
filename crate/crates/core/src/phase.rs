//! The oscillatory phase of the scattering jump and its saddle geometry.
//!
//! ```text
//! phi(z; n, t) = (1/2) i t (z - 1/z)^2 - n log z,     psi = phi / (it)
//! ```
//!
//! The branch of the logarithm is irrelevant for consumers (they only form
//! `e^{+-2 phi}` and `n` is an integer); the principal branch is used
//! throughout. The saddle points are the zeros of
//! `psi'(z) = z - z^{-3} - (n/(it)) z^{-1}`: for `n/t < 2` four points on the
//! unit circle, coalescing pairwise at `e^{-i pi/4}` and `e^{3 i pi/4}` when
//! `n = 2t`, and moving onto the line `Re z + Im z = 0` for `n/t > 2` with
//! radii `A > 1 > A'`, `A A' = 1`.
//!
//! Space-time regions for the asymptotics, for constants `V0, M, M'`:
//! cone `|n| <= (2 - V0) t` (A), front band
//! `2t - M t^{1/3} < |n| < 2t + M' t^{1/3}` (B, takes precedence), exterior
//! `|n| > (2 + V0) t` (C). For fixed constants these do not tile space-time;
//! the remainder is reported as a gap rather than silently extended.

use num_complex::Complex64;
use std::f64::consts::FRAC_1_SQRT_2;
use thiserror::Error;

/// `T_1 = T_2 = e^{-i pi/4}`, the coalescence point of the front.
pub const T1: Complex64 = Complex64::new(FRAC_1_SQRT_2, -FRAC_1_SQRT_2);

/// Angle of [`T1`] on the unit circle.
pub const T1_THETA: f64 = -std::f64::consts::FRAC_PI_4;

#[derive(Debug, Error)]
pub enum PhaseError {
    #[error("phi has a pole/branch point at z = 0")]
    ZeroArgument,
    #[error("sign-map grid node ({x}, {y}) coincides with the origin")]
    GridContainsOrigin { x: f64, y: f64 },
}

/// `phi(z; n, t)` on the principal log branch.
pub fn phi(z: Complex64, n: i64, t: f64) -> Result<Complex64, PhaseError> {
    if z.norm_sqr() == 0.0 {
        return Err(PhaseError::ZeroArgument);
    }
    let w = z - z.inv();
    Ok(Complex64::new(0.0, 0.5 * t) * w * w - (n as f64) * z.ln())
}

/// `psi = phi/(it)`.
pub fn psi(z: Complex64, n: i64, t: f64) -> Result<Complex64, PhaseError> {
    Ok(phi(z, n, t)? / Complex64::new(0.0, t))
}

/// `psi'(z) = z - z^{-3} - (n/(it)) z^{-1}`.
pub fn psi_prime(z: Complex64, n: i64, t: f64) -> Complex64 {
    let zi = z.inv();
    z - zi * zi * zi + Complex64::new(0.0, n as f64 / t) * zi
}

/// `psi''(z) = 1 + 3 z^{-4} + (n/(it)) z^{-2}`.
pub fn psi_second(z: Complex64, n: i64, t: f64) -> Complex64 {
    let zi2 = z.inv() * z.inv();
    Complex64::new(1.0, 0.0) + 3.0 * zi2 * zi2 - Complex64::new(0.0, n as f64 / t) * zi2
}

/// `psi'''(z) = -12 z^{-5} - (2n/(it)) z^{-3}`.
pub fn psi_third(z: Complex64, n: i64, t: f64) -> Complex64 {
    let zi = z.inv();
    let zi3 = zi * zi * zi;
    -12.0 * zi3 * zi * zi + Complex64::new(0.0, 2.0 * n as f64 / t) * zi3
}

/// Closed-form `(phi, phi', phi'', phi''')` at `T_1`:
///
/// ```text
/// phi   = (i/4)(-4t + pi n)         phi'  = (2t - n) e^{i pi/4}
/// phi'' = i(-2t + n)                phi''' = (-12t + 2n) e^{-i pi/4}
/// ```
pub fn phi_derivatives_at_t1(n: i64, t: f64) -> [Complex64; 4] {
    let n = n as f64;
    let e_p = Complex64::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2); // e^{i pi/4}
    let e_m = e_p.conj();
    [
        Complex64::new(0.0, 0.25 * (-4.0 * t + std::f64::consts::PI * n)),
        (2.0 * t - n) * e_p,
        Complex64::new(0.0, n - 2.0 * t),
        (-12.0 * t + 2.0 * n) * e_m,
    ]
}

/// Space-time region tags of the asymptotic theory.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    A,
    B,
    C,
    /// Between the A cone and the B band (or between B and C) for the given
    /// constants; no asymptotic claim applies there.
    Gap,
}

impl std::fmt::Display for Region {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Region::A => write!(f, "A"),
            Region::B => write!(f, "B"),
            Region::C => write!(f, "C"),
            Region::Gap => write!(f, "gap"),
        }
    }
}

/// Constants delimiting the regions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionConstants {
    /// Cone opening `0 < V0 < 2`: Region A is `|n| <= (2 - V0) t`.
    pub v0: f64,
    /// Left half-width of the B band in units of `t^{1/3}`.
    pub m_left: f64,
    /// Right half-width of the B band in units of `t^{1/3}`.
    pub m_right: f64,
}

impl Default for RegionConstants {
    fn default() -> Self {
        Self {
            v0: 0.5,
            m_left: 5.0,
            m_right: 5.0,
        }
    }
}

/// Classify `(n, t)`; symmetric in `n -> -n`. The B band takes precedence.
pub fn classify_region(n: i64, t: f64, constants: &RegionConstants) -> Region {
    let m = n.unsigned_abs() as f64;
    let cbrt = t.cbrt();
    if m > 2.0 * t - constants.m_left * cbrt && m < 2.0 * t + constants.m_right * cbrt {
        Region::B
    } else if m <= (2.0 - constants.v0) * t {
        Region::A
    } else if m > (2.0 + constants.v0) * t {
        Region::C
    } else {
        Region::Gap
    }
}

/// The four stationary points of `phi` for given `(n, t)`, in the labelling
/// order `S_1, S_2, S_3 = -S_1, S_4 = -S_2`.
#[derive(Debug, Clone)]
pub struct SaddleSet {
    pub saddles: [Complex64; 4],
    /// True iff `n = 2t` exactly, where `S_1 = S_2` and `S_3 = S_4`.
    pub coalesced: bool,
    /// Region tag under [`RegionConstants::default`].
    pub region: Region,
    pub ratio: f64,
}

/// Saddle points of `phi(.; n, t)` for `t > 0`. Negative `n` is mapped to
/// `|n|` (index-reflection symmetry of the lattice).
pub fn saddle_points(n: i64, t: f64) -> SaddleSet {
    let ratio = n.unsigned_abs() as f64 / t;
    let (s1, s2) = if ratio <= 2.0 {
        // on the circle: A = (sqrt(2 + r) - i sqrt(2 - r))/2, |A| = 1
        let a = Complex64::new((2.0 + ratio).sqrt(), -(2.0 - ratio).sqrt()) * 0.5;
        (T1 * a, T1 * a.conj())
    } else {
        // off the circle on Re z + Im z = 0: radii A > 1 > A' with A A' = 1
        let p = (2.0 + ratio).sqrt();
        let q = (ratio - 2.0).sqrt();
        (T1 * (0.5 * (p + q)), T1 * (0.5 * (p - q)))
    };
    SaddleSet {
        saddles: [s1, s2, -s1, -s2],
        coalesced: n.unsigned_abs() as f64 == 2.0 * t,
        region: classify_region(n, t, &RegionConstants::default()),
        ratio,
    }
}

/// Rectangular sampling grid for [`sign_map`]; `nx * ny` nodes placed at cell
/// centres so a symmetric box never puts a node on the origin.
#[derive(Debug, Clone, Copy)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub nx: usize,
    pub ny: usize,
}

impl GridSpec {
    pub fn centered(half_width: f64, n: usize) -> Self {
        Self {
            x_min: -half_width,
            x_max: half_width,
            y_min: -half_width,
            y_max: half_width,
            nx: n,
            ny: n,
        }
    }

    fn node(&self, ix: usize, iy: usize) -> (f64, f64) {
        let fx = (ix as f64 + 0.5) / self.nx as f64;
        let fy = (iy as f64 + 0.5) / self.ny as f64;
        (
            self.x_min + fx * (self.x_max - self.x_min),
            self.y_min + fy * (self.y_max - self.y_min),
        )
    }
}

/// Signs of `Re phi` on a rectangular grid, row-major with `y` varying slowest.
#[derive(Debug, Clone)]
pub struct SignMap {
    pub grid: GridSpec,
    pub signs: Vec<i8>,
}

impl SignMap {
    pub fn sign_at(&self, ix: usize, iy: usize) -> i8 {
        self.signs[iy * self.grid.nx + ix]
    }

    /// CSV rows `x,y,sign`.
    pub fn write_csv<W: std::io::Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "x,y,sign")?;
        for iy in 0..self.grid.ny {
            for ix in 0..self.grid.nx {
                let (x, y) = self.grid.node(ix, iy);
                writeln!(w, "{:.12e},{:.12e},{}", x, y, self.sign_at(ix, iy))?;
            }
        }
        Ok(())
    }
}

/// Map of `sign(Re phi)` over the grid: the zero-level curves of `Re phi`
/// separate the growth and decay regions of `e^{-2 phi}`.
pub fn sign_map(n: i64, t: f64, grid: &GridSpec) -> Result<SignMap, PhaseError> {
    let mut signs = Vec::with_capacity(grid.nx * grid.ny);
    for iy in 0..grid.ny {
        for ix in 0..grid.nx {
            let (x, y) = grid.node(ix, iy);
            if x * x + y * y < 1e-24 {
                return Err(PhaseError::GridContainsOrigin { x, y });
            }
            let re = phi(Complex64::new(x, y), n, t)?.re;
            signs.push(if re > 0.0 {
                1
            } else if re < 0.0 {
                -1
            } else {
                0
            });
        }
    }
    Ok(SignMap { grid: *grid, signs })
}

/// `Re phi` in polar coordinates: `-(t/2)(rho^2 - rho^{-2}) sin 2 theta
/// - n log rho`; vanishes identically on the unit circle.
pub fn re_phi_polar(rho: f64, theta: f64, n: i64, t: f64) -> f64 {
    -0.5 * t * (rho * rho - 1.0 / (rho * rho)) * (2.0 * theta).sin() - n as f64 * rho.ln()
}
