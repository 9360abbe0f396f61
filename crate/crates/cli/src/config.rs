//! Run configuration: TOML document with one optional section per
//! subcommand. Every field has a default, unknown keys are rejected, and the
//! effective (resolved) section is echoed into each output's JSON sidecar.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::Path;

/// Configuration failure; maps to exit code 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub evolve: Option<EvolveConfig>,
    pub scan: Option<ScanConfig>,
    pub classical: Option<ClassicalConfig>,
    pub bands: Option<BandsConfig>,
    pub gamma: Option<GammaConfig>,
}

impl RunConfig {
    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| ConfigError(format!("{}: {e}", path.display())))
    }
}

/// Time evolution of the ratchet current at fixed hbar_eff, one run per
/// kick amplitude.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EvolveConfig {
    /// hbar_eff / pi.
    pub hbar_over_pi: f64,
    /// One evolution (and one CSV) per listed P.
    pub kick_amplitudes: Vec<f64>,
    pub alpha: f64,
    /// Number of kicks l.
    pub kicks: u64,
    /// Record every this many kicks.
    pub record_every: u64,
    /// Initial quasi-momentum in [0, 1).
    pub beta: f64,
    /// Momentum truncation; None sizes the grid from P and kicks.
    pub m_max: Option<usize>,
}

impl Default for EvolveConfig {
    fn default() -> Self {
        Self {
            hbar_over_pi: 1.5,
            kick_amplitudes: vec![3.0],
            alpha: 0.3,
            kicks: 200,
            record_every: 1,
            beta: 0.0,
            m_max: None,
        }
    }
}

impl EvolveConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.kicks == 0 {
            return Err(ConfigError("kicks must be >= 1".into()));
        }
        if self.record_every == 0 {
            return Err(ConfigError("record_every must be >= 1".into()));
        }
        if self.kick_amplitudes.is_empty() {
            return Err(ConfigError("kick_amplitudes must not be empty".into()));
        }
        if !(0.0..1.0).contains(&self.beta) {
            return Err(ConfigError("beta must lie in [0, 1)".into()));
        }
        Ok(())
    }
}

/// Axis of a parameter sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    HbarOverPi,
    KickAmplitude,
}

/// Sweep of the final-time current over hbar_eff or the kick amplitude.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScanConfig {
    pub axis: Axis,
    /// Inclusive sweep range and step on the chosen axis.
    pub start: f64,
    pub stop: f64,
    pub step: f64,
    /// Fixed P for an hbar sweep.
    pub kick_amplitude: f64,
    /// Fixed hbar_eff / pi for a P sweep.
    pub hbar_over_pi: f64,
    pub alpha: f64,
    pub kicks: u64,
    pub m_max: Option<usize>,
    /// Peak detector: window size and ratio over the window median.
    pub peak_window: usize,
    pub peak_ratio: f64,
    /// Optional Gaussian quasi-momentum spread at every sample point.
    pub beta_sigma: Option<f64>,
    pub beta_samples: usize,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            axis: Axis::HbarOverPi,
            start: 0.1,
            stop: 4.0,
            step: 0.005,
            kick_amplitude: 0.5,
            hbar_over_pi: 1.5,
            alpha: 0.3,
            kicks: 200,
            m_max: None,
            peak_window: 9,
            peak_ratio: 5.0,
            beta_sigma: None,
            beta_samples: 21,
        }
    }
}

impl ScanConfig {
    pub fn values(&self) -> Result<Vec<f64>, ConfigError> {
        if !(self.step > 0.0) {
            return Err(ConfigError("step must be > 0".into()));
        }
        if self.stop < self.start {
            return Err(ConfigError("stop must be >= start".into()));
        }
        let count = ((self.stop - self.start) / self.step + 0.5).floor() as usize + 1;
        let values: Vec<f64> = (0..count)
            .map(|i| self.start + i as f64 * self.step)
            .filter(|&v| v <= self.stop + 1e-12)
            .collect();
        if values.is_empty() {
            return Err(ConfigError("empty value list".into()));
        }
        Ok(values)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.values()?;
        if self.kicks == 0 {
            return Err(ConfigError("kicks must be >= 1".into()));
        }
        if self.peak_window == 0 {
            return Err(ConfigError("peak_window must be >= 1".into()));
        }
        if let Some(sigma) = self.beta_sigma {
            if !(sigma > 0.0) {
                return Err(ConfigError("beta_sigma must be > 0".into()));
            }
            if self.beta_samples == 0 {
                return Err(ConfigError("beta_samples must be >= 1".into()));
            }
        }
        Ok(())
    }
}

/// Classical map diagnostics: phase portraits, chaotic fractions and the
/// optional chaos-threshold bisection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ClassicalConfig {
    /// One portrait and one chaos-fraction row per K / pi.
    pub kick_strengths_over_pi: Vec<f64>,
    pub alpha: f64,
    /// Portrait initial-condition grid side and steps per IC.
    pub ic_side: usize,
    pub steps_per_ic: u64,
    /// Chaos estimator: IC grid side, steps, transient, Lyapunov threshold.
    pub estimator_ic_side: usize,
    pub estimator_steps: u64,
    pub estimator_transient: u64,
    pub lambda_threshold: f64,
    /// Bisection for the K where the chaotic fraction reaches the target.
    pub find_threshold: bool,
    pub threshold_target: f64,
    pub bracket_lo_over_pi: f64,
    pub bracket_hi_over_pi: f64,
}

impl Default for ClassicalConfig {
    fn default() -> Self {
        Self {
            kick_strengths_over_pi: vec![0.25, 0.55, 0.70, 0.8],
            alpha: 0.3,
            ic_side: 20,
            steps_per_ic: 500,
            estimator_ic_side: 64,
            estimator_steps: 10_000,
            estimator_transient: 200,
            lambda_threshold: 0.05,
            find_threshold: false,
            threshold_target: 0.99,
            bracket_lo_over_pi: 0.5,
            bracket_hi_over_pi: 0.85,
        }
    }
}

impl ClassicalConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.kick_strengths_over_pi.is_empty() {
            return Err(ConfigError("kick_strengths_over_pi must not be empty".into()));
        }
        if self.ic_side == 0 || self.estimator_ic_side == 0 {
            return Err(ConfigError("ic_side must be >= 1".into()));
        }
        if self.steps_per_ic == 0 || self.estimator_steps == 0 {
            return Err(ConfigError("steps must be >= 1".into()));
        }
        if !(0.0 < self.threshold_target && self.threshold_target <= 1.0) {
            return Err(ConfigError("threshold_target must lie in (0, 1]".into()));
        }
        if self.find_threshold && self.bracket_lo_over_pi >= self.bracket_hi_over_pi {
            return Err(ConfigError("threshold bracket must satisfy lo < hi".into()));
        }
        Ok(())
    }
}

/// Bloch band counts below the barrier over a list of well depths.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BandsConfig {
    /// Explicit depth list; when empty, log-spaced from the range below.
    pub depths: Vec<f64>,
    pub depth_lo: f64,
    pub depth_hi: f64,
    pub depth_count: usize,
    pub alpha: f64,
    pub m_max: usize,
    pub beta_samples: usize,
}

impl Default for BandsConfig {
    fn default() -> Self {
        Self {
            depths: Vec::new(),
            depth_lo: 5.0,
            depth_hi: 200.0,
            depth_count: 12,
            alpha: 0.3,
            m_max: 128,
            beta_samples: 33,
        }
    }
}

impl BandsConfig {
    pub fn depth_list(&self) -> Result<Vec<f64>, ConfigError> {
        if !self.depths.is_empty() {
            return Ok(self.depths.clone());
        }
        if self.depth_count == 0 {
            return Err(ConfigError("depth_count must be >= 1".into()));
        }
        if !(self.depth_lo > 0.0) || self.depth_hi < self.depth_lo {
            return Err(ConfigError("depth range must satisfy 0 < lo <= hi".into()));
        }
        Ok(ratchet_core::bands::log_spaced(
            self.depth_lo,
            self.depth_hi,
            self.depth_count,
        ))
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.depth_list()?;
        if self.m_max == 0 {
            return Err(ConfigError("m_max must be >= 1".into()));
        }
        if self.beta_samples == 0 {
            return Err(ConfigError("beta_samples must be >= 1".into()));
        }
        Ok(())
    }
}

/// Acceleration rate Gamma = <k>(l) / l against P, one curve per hbar_eff.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GammaConfig {
    /// One curve (and one CSV) per hbar_eff / pi.
    pub hbar_over_pi: Vec<f64>,
    pub p_start: f64,
    pub p_stop: f64,
    pub p_step: f64,
    pub alpha: f64,
    pub kicks: u64,
    pub m_max: Option<usize>,
}

impl Default for GammaConfig {
    fn default() -> Self {
        Self {
            hbar_over_pi: vec![0.7, 1.5, 2.625],
            p_start: 0.5,
            p_stop: 8.0,
            p_step: 0.25,
            alpha: 0.3,
            kicks: 100,
            m_max: Some(2048),
        }
    }
}

impl GammaConfig {
    pub fn p_values(&self) -> Result<Vec<f64>, ConfigError> {
        if !(self.p_step > 0.0) {
            return Err(ConfigError("p_step must be > 0".into()));
        }
        if self.p_stop < self.p_start {
            return Err(ConfigError("p_stop must be >= p_start".into()));
        }
        let count = ((self.p_stop - self.p_start) / self.p_step + 0.5).floor() as usize + 1;
        let values: Vec<f64> = (0..count)
            .map(|i| self.p_start + i as f64 * self.p_step)
            .filter(|&v| v <= self.p_stop + 1e-12)
            .collect();
        if values.is_empty() {
            return Err(ConfigError("empty P list".into()));
        }
        Ok(values)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.p_values()?;
        if self.hbar_over_pi.is_empty() {
            return Err(ConfigError("hbar_over_pi must not be empty".into()));
        }
        if self.kicks == 0 {
            return Err(ConfigError("kicks must be >= 1".into()));
        }
        Ok(())
    }
}
