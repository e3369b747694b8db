//! Numerical laboratory for the defocusing integrable discrete nonlinear
//! Schrödinger (Ablowitz–Ladik) lattice
//!
//! ```text
//! i dR_n/dt + (R_{n+1} - 2 R_n + R_{n-1}) - |R_n|^2 (R_{n+1} + R_{n-1}) = 0
//! ```
//!
//! The crate bundles everything needed to compare direct simulation of the
//! lattice against its long-time wavefront asymptotics:
//!
//! * [`lattice`] — state representation and high-order time integration;
//! * [`scattering`] — transfer-matrix direct scattering, the reflection
//!   coefficient r(z) on the unit circle and its time evolution;
//! * [`phase`] — the oscillatory phase φ(z; n, t), its saddle points and the
//!   A/B/C space-time region geometry;
//! * [`painleve`] — Airy functions and the Ablowitz–Segur branch of
//!   Painlevé II, u″ = s·u + 2u³, parametrized by Stokes data;
//! * [`asymptotics`] — the Painlevé wavefront prediction near n = 2t, decay
//!   exponent fitting, and super-polynomial decay checks beyond the front.

pub mod asymptotics;
pub mod lattice;
pub mod painleve;
pub mod phase;
pub mod scattering;

pub use num_complex::Complex64;
