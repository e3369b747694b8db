//! Experiment harness for the lattice-asymptotics laboratory: configuration,
//! reproducible experiment drivers, calibration of the Airy matching sign,
//! and CSV reporting. The `idnls-lab` binary wires these into subcommands.

pub mod config;
pub mod experiments;
pub mod report;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Lattice(#[from] idnls_core::lattice::LatticeError),
    #[error(transparent)]
    Scatter(#[from] idnls_core::scattering::ScatterError),
    #[error(transparent)]
    Asymptotics(#[from] idnls_core::asymptotics::AsymError),
    #[error(transparent)]
    Painleve(#[from] idnls_core::painleve::P2Error),
    #[error(transparent)]
    Phase(#[from] idnls_core::phase::PhaseError),
    #[error("inconclusive calibration: residual ratio {ratio:.3} (plus {residual_plus:e}, minus {residual_minus:e})")]
    InconclusiveCalibration {
        ratio: f64,
        residual_plus: f64,
        residual_minus: f64,
    },
    #[error("calibration required: run the `calibrate` subcommand first")]
    CalibrationRequired,
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
