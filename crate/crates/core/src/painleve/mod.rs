//! The Painlevé II transcendent `u'' = s u + 2 u^3` for the Stokes data
//! arising at the lattice wavefront.
//!
//! The front asymptotics need `u(s; p, q, r)` only for the one-parameter
//! family `(p, q, r) = (i kappa, -i kappa, 0)` with real `|kappa| < 1`, which
//! is the bounded real Ablowitz–Segur branch: the solution decaying like
//! `beta * Ai(s)` as `s -> +infinity` with `|beta| = |kappa| < 1`. Rather than
//! solving the associated Riemann–Hilbert problem, the solver integrates the
//! ODE backward from `s_max` with Airy boundary data `u = beta Ai`,
//! `u' = beta Ai'`; backward is the direction in which the decaying branch is
//! numerically stable. The map `kappa -> beta` is `beta = sigma * kappa` with
//! a single global sign `sigma` fixed once by the calibration experiment
//! against direct simulation.

pub mod airy;

pub use airy::{airy, AiryError};

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum P2Error {
    #[error(transparent)]
    Airy(#[from] AiryError),
    #[error("Stokes constraint r = p + q + pqr violated: defect {defect:e}")]
    StokesConstraint { defect: f64 },
    #[error("unsupported Stokes data: {0}")]
    UnsupportedStokes(String),
    #[error("|kappa| = {kappa} beyond the supported ceiling 0.95")]
    KappaOutOfRange { kappa: f64 },
    #[error("divergence: |u({s})| = {u_abs:e} exceeded the bound 1e3")]
    Divergence { s: f64, u_abs: f64 },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("s = {s} outside the solved range [{s_min}, {s_max}]")]
    OutOfRange { s: f64, s_min: f64, s_max: f64 },
}

/// Painlevé II Stokes parameters subject to `r = p + q + p q r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StokesData {
    pub p: Complex64,
    pub q: Complex64,
    pub r: Complex64,
}

impl StokesData {
    /// Validates the constraint to 1e-14 (relative to the data size).
    pub fn new(p: Complex64, q: Complex64, r: Complex64) -> Result<Self, P2Error> {
        let defect = (r - (p + q + p * q * r)).norm();
        let scale = 1.0 + p.norm() + q.norm() + r.norm();
        if defect > 1e-14 * scale {
            return Err(P2Error::StokesConstraint { defect });
        }
        Ok(Self { p, q, r })
    }

    /// `r` resolved from `(p, q)` as `(p + q)/(1 - pq)`.
    pub fn from_pq(p: Complex64, q: Complex64) -> Result<Self, P2Error> {
        let denom = Complex64::new(1.0, 0.0) - p * q;
        if denom.norm() < 1e-14 {
            return Err(P2Error::UnsupportedStokes("pq = 1".into()));
        }
        Self::new(p, q, (p + q) / denom)
    }

    /// The wavefront case `(p, -p, 0)` built from the time-shifted reflection
    /// value; `p` must be purely imaginary there.
    pub fn front(r_t1_shifted: Complex64) -> Result<Self, P2Error> {
        Self::new(r_t1_shifted, -r_t1_shifted, Complex64::new(0.0, 0.0))
    }
}

/// Sign of the Airy matching coefficient `beta = sigma * kappa`; decided by
/// the calibration experiment, not by theory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MatchingSign {
    #[default]
    Plus,
    Minus,
}

impl MatchingSign {
    pub fn value(self) -> f64 {
        match self {
            MatchingSign::Plus => 1.0,
            MatchingSign::Minus => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            MatchingSign::Plus => MatchingSign::Minus,
            MatchingSign::Minus => MatchingSign::Plus,
        }
    }
}

impl TryFrom<i8> for MatchingSign {
    type Error = String;
    fn try_from(v: i8) -> Result<Self, String> {
        match v {
            1 => Ok(MatchingSign::Plus),
            -1 => Ok(MatchingSign::Minus),
            other => Err(format!("matching sign must be +1 or -1, got {other}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct P2Config {
    pub s_min: f64,
    pub s_max: f64,
    pub grid_step: f64,
    pub tol: f64,
    pub sigma: MatchingSign,
}

impl Default for P2Config {
    fn default() -> Self {
        Self {
            s_min: -10.0,
            s_max: 8.0,
            grid_step: 0.01,
            tol: 1e-10,
            sigma: MatchingSign::Plus,
        }
    }
}

/// Tabulated Ablowitz–Segur solution with its matching data.
#[derive(Debug, Clone)]
pub struct Painleve2Solution {
    s_grid: Vec<f64>,
    u_values: Vec<f64>,
    u_derivs: Vec<f64>,
    beta: f64,
    kappa: f64,
}

impl Painleve2Solution {
    pub fn s_min(&self) -> f64 {
        self.s_grid[0]
    }

    pub fn s_max(&self) -> f64 {
        *self.s_grid.last().unwrap()
    }

    pub fn s_grid(&self) -> &[f64] {
        &self.s_grid
    }

    pub fn u_values(&self) -> &[f64] {
        &self.u_values
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// `u(s)` by cubic Hermite interpolation of the stored solution; exact at
    /// grid nodes.
    pub fn eval(&self, s: f64) -> Result<f64, P2Error> {
        let (s_min, s_max) = (self.s_min(), self.s_max());
        if !(s_min..=s_max).contains(&s) {
            return Err(P2Error::OutOfRange { s, s_min, s_max });
        }
        let step = self.s_grid[1] - self.s_grid[0];
        let mut k = ((s - s_min) / step).floor() as usize;
        if k + 1 >= self.s_grid.len() {
            k = self.s_grid.len() - 2;
        }
        let (s0, s1) = (self.s_grid[k], self.s_grid[k + 1]);
        if s == s0 {
            return Ok(self.u_values[k]);
        }
        if s == s1 {
            return Ok(self.u_values[k + 1]);
        }
        let h = s1 - s0;
        let x = (s - s0) / h;
        let (u0, u1) = (self.u_values[k], self.u_values[k + 1]);
        let (d0, d1) = (self.u_derivs[k] * h, self.u_derivs[k + 1] * h);
        let x2 = x * x;
        let x3 = x2 * x;
        Ok(u0 * (2.0 * x3 - 3.0 * x2 + 1.0)
            + d0 * (x3 - 2.0 * x2 + x)
            + u1 * (-2.0 * x3 + 3.0 * x2)
            + d1 * (x3 - x2))
    }

    /// Worst normalized PII residual `|u'' - s u - 2u^3| / (1 + |u|)` over
    /// interior grid nodes, with `u''` from the five-point fourth-order
    /// stencil.
    pub fn max_residual(&self) -> f64 {
        let h = self.s_grid[1] - self.s_grid[0];
        let mut worst = 0.0f64;
        for k in 2..self.s_grid.len() - 2 {
            let u2 = (-self.u_values[k - 2] + 16.0 * self.u_values[k - 1]
                - 30.0 * self.u_values[k]
                + 16.0 * self.u_values[k + 1]
                - self.u_values[k + 2])
                / (12.0 * h * h);
            let u = self.u_values[k];
            let res = (u2 - self.s_grid[k] * u - 2.0 * u * u * u).abs() / (1.0 + u.abs());
            worst = worst.max(res);
        }
        worst
    }
}

fn p2_rhs(s: f64, u: f64, v: f64) -> (f64, f64) {
    (v, s * u + 2.0 * u * u * u)
}

/// Integrate the Ablowitz–Segur branch for the given Stokes data backward
/// from `config.s_max`, tabulating on a uniform grid.
///
/// Supported data: `q = -p`, `r = 0`, `p = i kappa` purely imaginary with
/// `|kappa| <= 0.95`; the Hastings–McLeod-adjacent regime `kappa -> 1` is out
/// of range.
pub fn solve_p2(stokes: &StokesData, config: &P2Config) -> Result<Painleve2Solution, P2Error> {
    let scale = 1.0 + stokes.p.norm();
    if (stokes.q + stokes.p).norm() > 1e-14 * scale {
        return Err(P2Error::UnsupportedStokes(format!(
            "q = {} is not -p = {}",
            stokes.q, -stokes.p
        )));
    }
    if stokes.r.norm() > 1e-14 * scale {
        return Err(P2Error::UnsupportedStokes(format!(
            "r = {} is not 0",
            stokes.r
        )));
    }
    if stokes.p.re.abs() > 1e-12 * scale {
        return Err(P2Error::UnsupportedStokes(format!(
            "p = {} is not purely imaginary",
            stokes.p
        )));
    }
    let kappa = stokes.p.im;
    if kappa.abs() > 0.95 {
        return Err(P2Error::KappaOutOfRange { kappa });
    }
    if !(6.0..=airy::SUPPORT).contains(&config.s_max) {
        return Err(P2Error::InvalidGrid(format!(
            "s_max = {} outside [6, {}]",
            config.s_max,
            airy::SUPPORT
        )));
    }
    if config.s_min < -12.0 || config.s_min >= config.s_max {
        return Err(P2Error::InvalidGrid(format!(
            "s_min = {} outside [-12, s_max)",
            config.s_min
        )));
    }
    if config.grid_step <= 0.0 || config.tol <= 0.0 {
        return Err(P2Error::InvalidGrid(
            "grid_step and tol must be positive".into(),
        ));
    }

    let beta = config.sigma.value() * kappa;
    let (ai, aip) = airy(config.s_max)?;
    let mut u = beta * ai;
    let mut v = beta * aip;

    let span = config.s_max - config.s_min;
    let cells = (span / config.grid_step).ceil().max(1.0) as usize;
    let cell = span / cells as f64;
    // RK4 global error ~ h^4; pick the substep so the configured tolerance is
    // met with margin
    let substeps = ((cell / config.tol.powf(0.25)) * 1.5).ceil().max(2.0) as usize;
    let h = -cell / substeps as f64;

    let mut s_grid = Vec::with_capacity(cells + 1);
    let mut u_values = Vec::with_capacity(cells + 1);
    let mut u_derivs = Vec::with_capacity(cells + 1);
    s_grid.push(config.s_max);
    u_values.push(u);
    u_derivs.push(v);

    let mut s = config.s_max;
    for cell_idx in 0..cells {
        for _ in 0..substeps {
            let (k1u, k1v) = p2_rhs(s, u, v);
            let (k2u, k2v) = p2_rhs(s + 0.5 * h, u + 0.5 * h * k1u, v + 0.5 * h * k1v);
            let (k3u, k3v) = p2_rhs(s + 0.5 * h, u + 0.5 * h * k2u, v + 0.5 * h * k2v);
            let (k4u, k4v) = p2_rhs(s + h, u + h * k3u, v + h * k3v);
            u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
            v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
            s += h;
        }
        // snap to the exact node (fp drift would otherwise shift the grid)
        s = if cell_idx + 1 == cells {
            config.s_min
        } else {
            config.s_max - (cell_idx + 1) as f64 * cell
        };
        if u.abs() > 1e3 {
            return Err(P2Error::Divergence { s, u_abs: u.abs() });
        }
        s_grid.push(s);
        u_values.push(u);
        u_derivs.push(v);
    }

    s_grid.reverse();
    u_values.reverse();
    u_derivs.reverse();
    Ok(Painleve2Solution {
        s_grid,
        u_values,
        u_derivs,
        beta,
        kappa,
    })
}
