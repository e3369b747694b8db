//! Experiment configuration: a flat TOML file of key-value sections, plus the
//! persisted calibration state kept beside it.

use crate::LabError;
use idnls_core::lattice::LatticeState;
use idnls_core::painleve::{MatchingSign, P2Config};
use idnls_core::phase::RegionConstants;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub initial: InitialData,
    pub evolution: Evolution,
    pub regions: RegionSettings,
    pub scattering: ScatteringSettings,
    pub painleve: PainleveSettings,
    pub checks: CheckTolerances,
    pub signmap: SignMapSettings,
    pub output: OutputSettings,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialKind {
    SingleSite,
    ThreeSite,
    Sech,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InitialData {
    pub kind: InitialKind,
    pub amplitude: f64,
    /// Sech profile width `w` in `c sech(w (n - offset))`; ignored otherwise.
    pub width: f64,
    pub offset: i64,
}

impl Default for InitialData {
    fn default() -> Self {
        Self {
            kind: InitialKind::SingleSite,
            amplitude: 0.3,
            width: 1.0,
            offset: 0,
        }
    }
}

impl InitialData {
    pub fn build(&self) -> Result<LatticeState, LabError> {
        let c = Complex64::new(self.amplitude, 0.0);
        Ok(match self.kind {
            InitialKind::SingleSite => LatticeState::single_site(c, self.offset)?,
            InitialKind::ThreeSite => LatticeState::three_site(c, self.offset)?,
            InitialKind::Sech => LatticeState::sech_profile(self.amplitude, self.width, self.offset)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Evolution {
    pub dt: f64,
    /// Snapshot times, strictly increasing.
    pub times: Vec<f64>,
    /// Window padding in units of the final time (wavefront speed is 2; the
    /// region-scan ray n = 3t needs at least 3.2).
    pub padding_factor: f64,
    pub leak_threshold: f64,
    pub drift_tol: Option<f64>,
}

impl Default for Evolution {
    fn default() -> Self {
        Self {
            dt: 5e-3,
            times: vec![100.0, 122.0, 149.0, 181.0, 221.0, 270.0, 329.0, 400.0],
            padding_factor: 2.5,
            leak_threshold: 1e-10,
            drift_tol: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RegionSettings {
    pub v0: f64,
    pub m_left: f64,
    pub m_right: f64,
}

impl Default for RegionSettings {
    fn default() -> Self {
        Self {
            v0: 0.5,
            m_left: 5.0,
            m_right: 5.0,
        }
    }
}

impl RegionSettings {
    pub fn constants(&self) -> RegionConstants {
        RegionConstants {
            v0: self.v0,
            m_left: self.m_left,
            m_right: self.m_right,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScatteringSettings {
    pub angle_grid: usize,
}

impl Default for ScatteringSettings {
    fn default() -> Self {
        Self { angle_grid: 2048 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PainleveSettings {
    pub s_min: f64,
    pub s_max: f64,
    pub grid_step: f64,
    pub tol: f64,
}

impl Default for PainleveSettings {
    fn default() -> Self {
        Self {
            s_min: -10.0,
            s_max: 8.0,
            grid_step: 0.01,
            tol: 1e-10,
        }
    }
}

impl PainleveSettings {
    pub fn solver_config(&self, sigma: MatchingSign) -> P2Config {
        P2Config {
            s_min: self.s_min,
            s_max: self.s_max,
            grid_step: self.grid_step,
            tol: self.tol,
            sigma,
        }
    }
}

/// End-to-end tolerances. The asymptotic theorems fix only orders, never
/// constants, so these are artifact choices; they are reported alongside
/// every verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CheckTolerances {
    /// `|sim|/|pred|` at the largest time must sit within this of 1.
    pub magnitude_ratio: f64,
    /// Window around -1/3 for the front decay exponent.
    pub b_exponent_window: f64,
    /// Window around -2/3 for the |sim - pred| decay exponent.
    pub diff_exponent_window: f64,
    /// Window around -1/2 for the interior-cone decay exponent.
    pub a_exponent_window: f64,
    /// Upper bound on the log-linear slope in n beyond the front.
    pub c_slope_max: f64,
    /// Required residual separation between the two matching signs.
    pub calibration_ratio: f64,
}

impl Default for CheckTolerances {
    fn default() -> Self {
        Self {
            magnitude_ratio: 0.15,
            b_exponent_window: 0.05,
            diff_exponent_window: 0.15,
            a_exponent_window: 0.05,
            c_slope_max: -0.1,
            calibration_ratio: 3.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SignMapSettings {
    pub n: i64,
    pub t: f64,
    pub half_width: f64,
    pub resolution: usize,
}

impl Default for SignMapSettings {
    fn default() -> Self {
        Self {
            n: 150,
            t: 100.0,
            half_width: 2.0,
            resolution: 401,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSettings {
    pub dir: PathBuf,
}

impl Default for OutputSettings {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("out"),
        }
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, LabError> {
        let text = std::fs::read_to_string(path)?;
        let config: Self = toml::from_str(&text).map_err(|e| LabError::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn save(&self, path: &Path) -> Result<(), LabError> {
        std::fs::write(path, self.to_toml()?)?;
        Ok(())
    }

    pub fn to_toml(&self) -> Result<String, LabError> {
        toml::to_string_pretty(self).map_err(|e| LabError::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<(), LabError> {
        let bad = |msg: String| Err(LabError::Config(msg));
        if !(0.0..1.0).contains(&self.initial.amplitude) {
            return bad(format!(
                "initial.amplitude must be in [0, 1), got {}",
                self.initial.amplitude
            ));
        }
        if self.initial.width <= 0.0 {
            return bad("initial.width must be positive".into());
        }
        if self.evolution.dt <= 0.0 {
            return bad("evolution.dt must be positive".into());
        }
        if self.evolution.times.is_empty() {
            return bad("evolution.times must not be empty".into());
        }
        if self.evolution.times[0] <= 0.0 {
            return bad("evolution.times must be positive".into());
        }
        if self.evolution.times.windows(2).any(|w| w[1] <= w[0]) {
            return bad("evolution.times must be strictly increasing".into());
        }
        if self.evolution.padding_factor <= 2.0 {
            return bad("evolution.padding_factor must exceed the wavefront speed 2".into());
        }
        if self.evolution.leak_threshold <= 0.0 {
            return bad("evolution.leak_threshold must be positive".into());
        }
        if !(0.0..2.0).contains(&self.regions.v0) || self.regions.v0 == 0.0 {
            return bad("regions.v0 must be in (0, 2)".into());
        }
        if self.regions.m_left <= 0.0 || self.regions.m_right <= 0.0 {
            return bad("regions.m_left/m_right must be positive".into());
        }
        if self.scattering.angle_grid < 8 {
            return bad("scattering.angle_grid must be at least 8".into());
        }
        if self.painleve.tol <= 0.0 || self.painleve.grid_step <= 0.0 {
            return bad("painleve.tol and painleve.grid_step must be positive".into());
        }
        let c = &self.checks;
        if [
            c.magnitude_ratio,
            c.b_exponent_window,
            c.diff_exponent_window,
            c.a_exponent_window,
        ]
        .iter()
        .any(|v| *v <= 0.0)
            || c.calibration_ratio < 1.0
        {
            return bad("checks tolerances must be positive (calibration_ratio >= 1)".into());
        }
        Ok(())
    }

    /// FNV-1a hash of the canonical TOML form, recorded in every output.
    pub fn hash(&self) -> String {
        let text = self.to_toml().unwrap_or_default();
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in text.bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x1_0000_0000_01b3);
        }
        format!("{h:016x}")
    }
}

/// Persisted result of the calibration experiment, stored beside the config.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationState {
    /// +1 or -1.
    pub sigma: i8,
    pub kappa: f64,
    pub residual_plus: f64,
    pub residual_minus: f64,
    pub config_hash: String,
}

impl CalibrationState {
    pub fn sign(&self) -> Result<MatchingSign, LabError> {
        MatchingSign::try_from(self.sigma).map_err(LabError::Config)
    }

    pub fn path_beside(config_path: &Path) -> PathBuf {
        let stem = config_path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "config".into());
        config_path.with_file_name(format!("{stem}.calibration.toml"))
    }

    pub fn load(path: &Path) -> Result<Self, LabError> {
        let text = std::fs::read_to_string(path)?;
        toml::from_str(&text).map_err(|e| LabError::Config(e.to_string()))
    }

    pub fn save(&self, path: &Path) -> Result<(), LabError> {
        let text = toml::to_string_pretty(self).map_err(|e| LabError::Config(e.to_string()))?;
        std::fs::write(path, text)?;
        Ok(())
    }
}
