//! Deterministic parameter sweeps over the effective Planck constant and the
//! kick amplitude, with peak detection and resonance labeling.
//!
//! Each sample point is an independent task; rows are assembled in the
//! requested order, so the output never depends on worker count or
//! scheduling.

use crate::error::RatchetError;
use crate::fit::{fit_line, LineFit};
use crate::model::{
    classify_resonance, Grid, ModelParams, ResonanceLabel, RESONANCE_S_MAX, RESONANCE_TOL_ABS,
};
use crate::quantum::{evolve, gaussian_beta_samples, quasimomentum_average};
use crate::Result;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Swept parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanAxis {
    /// Values are hbar_eff / pi at fixed kick amplitude P.
    HbarOverPi,
    /// Values are P at fixed hbar_eff.
    KickAmplitude,
}

/// Gaussian quasi-momentum spread applied at every sample point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaSpread {
    pub sigma: f64,
    pub samples: usize,
}

/// Sweep request: axis, sample points, fixed parameters and run length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanSpec {
    pub axis: ScanAxis,
    /// Strictly increasing sample points on the chosen axis.
    pub values: Vec<f64>,
    pub alpha: f64,
    /// Fixed P for an hbar scan; ignored for a P scan.
    pub kick_amplitude: f64,
    /// Fixed hbar_eff for a P scan; ignored for an hbar scan.
    pub hbar_eff: f64,
    pub l_max: u64,
    /// Momentum truncation override; `None` sizes the grid from P and l_max.
    pub m_max: Option<usize>,
    pub beta_spread: Option<BetaSpread>,
}

impl ScanSpec {
    /// Sweep of hbar_eff / pi at fixed kick amplitude.
    pub fn hbar_scan(values: Vec<f64>, kick_amplitude: f64, alpha: f64, l_max: u64) -> Self {
        Self {
            axis: ScanAxis::HbarOverPi,
            values,
            alpha,
            kick_amplitude,
            hbar_eff: 0.0,
            l_max,
            m_max: None,
            beta_spread: None,
        }
    }

    /// Sweep of the kick amplitude at fixed hbar_eff.
    pub fn amplitude_scan(values: Vec<f64>, hbar_eff: f64, alpha: f64, l_max: u64) -> Self {
        Self {
            axis: ScanAxis::KickAmplitude,
            values,
            alpha,
            kick_amplitude: 0.0,
            hbar_eff,
            l_max,
            m_max: None,
            beta_spread: None,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(RatchetError::InvalidScanSpec("empty value list".into()));
        }
        if self.values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(RatchetError::InvalidScanSpec(
                "values must be strictly increasing".into(),
            ));
        }
        if self.l_max < 1 {
            return Err(RatchetError::InvalidScanSpec("l_max must be >= 1".into()));
        }
        Ok(())
    }

    fn point_params(&self, value: f64) -> Result<ModelParams> {
        match self.axis {
            ScanAxis::HbarOverPi => {
                ModelParams::from_kick_amplitude(self.kick_amplitude, self.alpha, value * PI)
            }
            ScanAxis::KickAmplitude => {
                ModelParams::from_kick_amplitude(value, self.alpha, self.hbar_eff)
            }
        }
    }
}

/// One sweep row. Rows that hit the aliasing guard carry the error message
/// instead of observables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub param_value: f64,
    pub mean_k: Option<f64>,
    pub norm: Option<f64>,
    pub label: ResonanceLabel,
    pub error: Option<String>,
}

/// Sweep output: one row per requested value, in request order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    pub spec: ScanSpec,
    /// Truncation actually used per row.
    pub m_max_used: usize,
    pub rows: Vec<ScanRow>,
}

/// Runs the sweep. Sample points are independent and evaluated in parallel;
/// aliasing aborts are recorded per row, not fatal to the scan.
pub fn scan(spec: &ScanSpec) -> Result<ScanResult> {
    spec.validate()?;
    let max_amplitude = match spec.axis {
        ScanAxis::HbarOverPi => spec.kick_amplitude,
        ScanAxis::KickAmplitude => spec.values.last().copied().unwrap_or(0.0),
    };
    let grid = spec
        .m_max
        .map(Grid::new)
        .unwrap_or_else(|| Grid::sized_for(max_amplitude, spec.l_max));
    let rows: Vec<ScanRow> = spec
        .values
        .par_iter()
        .map(|&value| {
            let params = match spec.point_params(value) {
                Ok(p) => p,
                Err(err) => {
                    return ScanRow {
                        param_value: value,
                        mean_k: None,
                        norm: None,
                        label: ResonanceLabel::NonResonant,
                        error: Some(err.to_string()),
                    }
                }
            };
            let label = classify_resonance(params.hbar_eff, RESONANCE_S_MAX, RESONANCE_TOL_ABS);
            let outcome = match spec.beta_spread {
                Some(spread) => {
                    let (betas, weights) = gaussian_beta_samples(spread.sigma, spread.samples);
                    quasimomentum_average(&params, grid, &betas, &weights, spec.l_max, spec.l_max)
                }
                None => evolve(&params, grid, 0.0, spec.l_max, spec.l_max),
            };
            match outcome {
                Ok(series) => {
                    let last = series.last();
                    ScanRow {
                        param_value: value,
                        mean_k: Some(last.mean_k),
                        norm: Some(last.norm),
                        label,
                        error: None,
                    }
                }
                Err(err) => ScanRow {
                    param_value: value,
                    mean_k: None,
                    norm: None,
                    label,
                    error: Some(err.to_string()),
                },
            }
        })
        .collect();
    Ok(ScanResult {
        spec: spec.clone(),
        m_max_used: grid.m_max(),
        rows,
    })
}

/// A detected sweep peak with its resonance label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Peak {
    pub param_value: f64,
    pub mean_k: f64,
    pub label: ResonanceLabel,
    /// Peak current over the local background (window median of |mean_k|).
    pub prominence: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeakCatalog {
    pub window: usize,
    pub threshold_ratio: f64,
    pub peaks: Vec<Peak>,
}

/// Marks a row as a peak when |mean_k| is the strict maximum of its window
/// and exceeds `threshold_ratio` times the window median of |mean_k|.
/// Error rows are excluded from windows.
pub fn detect_peaks(result: &ScanResult, window: usize, threshold_ratio: f64) -> Result<PeakCatalog> {
    let valid: Vec<&ScanRow> = result.rows.iter().filter(|r| r.error.is_none()).collect();
    if valid.len() < window {
        return Err(RatchetError::TooFewPoints {
            required: window,
            got: valid.len(),
        });
    }
    let half = window / 2;
    let magnitudes: Vec<f64> = valid
        .iter()
        .map(|r| r.mean_k.expect("valid row").abs())
        .collect();
    let mut peaks = Vec::new();
    for i in 0..valid.len() {
        let lo = i.saturating_sub(half);
        let hi = (i + half + 1).min(valid.len());
        let slice = &magnitudes[lo..hi];
        let center = magnitudes[i];
        if center == 0.0 {
            continue;
        }
        let is_max = slice
            .iter()
            .enumerate()
            .all(|(j, &v)| lo + j == i || v < center);
        if !is_max {
            continue;
        }
        let mut sorted = slice.to_vec();
        sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        let median = sorted[sorted.len() / 2];
        if center > threshold_ratio * median {
            peaks.push(Peak {
                param_value: valid[i].param_value,
                mean_k: valid[i].mean_k.expect("valid row"),
                label: valid[i].label,
                prominence: if median > 0.0 { center / median } else { f64::INFINITY },
            });
        }
    }
    Ok(PeakCatalog {
        window,
        threshold_ratio,
        peaks,
    })
}

/// Average current acceleration rate `<k>(l) / l`.
pub fn acceleration_rate(params: &ModelParams, grid: Grid, beta: f64, l: u64) -> Result<f64> {
    let series = evolve(params, grid, beta, l, l)?;
    Ok(series.last().mean_k / l as f64)
}

/// Linear fit of |<k>| against the kick count at the given sample points.
pub fn peak_growth_check(
    params: &ModelParams,
    grid: Grid,
    beta: f64,
    l_list: &[u64],
) -> Result<LineFit> {
    if l_list.len() < 3 {
        return Err(RatchetError::TooFewPoints {
            required: 3,
            got: l_list.len(),
        });
    }
    let l_max = *l_list.iter().max().expect("nonempty");
    let series = evolve(params, grid, beta, l_max, 1)?;
    let xs: Vec<f64> = l_list.iter().map(|&l| l as f64).collect();
    let ys: Vec<f64> = l_list
        .iter()
        .map(|&l| series.at(l).expect("recorded every kick").mean_k.abs())
        .collect();
    Ok(fit_line(&xs, &ys))
}
