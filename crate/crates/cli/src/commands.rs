//! Subcommand implementations. Each command resolves its config section,
//! runs the core computation and writes CSV files plus JSON sidecars.

use crate::config::{
    Axis, BandsConfig, ClassicalConfig, ConfigError, EvolveConfig, GammaConfig, ScanConfig,
};
use crate::output::{number_token, write_csv, write_json};
use rayon::prelude::*;
use ratchet_core::bands::{band_count_sweep, fit_sqrt_scaling, ScalingFit};
use ratchet_core::classical::{chaos_fraction, find_chaos_threshold, phase_portrait, ChaosEstimator};
use ratchet_core::sweep::{acceleration_rate, detect_peaks, scan, BetaSpread, ScanSpec};
use ratchet_core::{evolve, Grid, ModelParams, RatchetError, ResonanceLabel};
use serde::Serialize;
use std::fmt::Write as _;
use std::f64::consts::PI;
use std::path::Path;

/// Command failure, carrying the process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Exit 2: bad configuration.
    Config(String),
    /// Exit 3: runtime guard violation (momentum truncation too small).
    Guard(String),
    /// Exit 1: I/O trouble.
    Io(std::io::Error),
}

impl From<ConfigError> for CliError {
    fn from(err: ConfigError) -> Self {
        CliError::Config(err.0)
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Io(err)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "config error: {msg}"),
            CliError::Guard(msg) => write!(f, "guard violation: {msg}"),
            CliError::Io(err) => write!(f, "io error: {err}"),
        }
    }
}

fn core_error(err: RatchetError) -> CliError {
    match err {
        RatchetError::AliasingGuard { .. } => CliError::Guard(err.to_string()),
        other => CliError::Config(other.to_string()),
    }
}

/// CSV cell for an optional error message; quoted so commas stay inside.
fn error_cell(error: &Option<String>) -> String {
    match error {
        Some(msg) => format!("\"{}\"", msg.replace('"', "'")),
        None => String::new(),
    }
}

fn label_cells(label: &ResonanceLabel) -> (String, String) {
    match label {
        ResonanceLabel::Resonant { r, s } => (r.to_string(), s.to_string()),
        ResonanceLabel::NonResonant => (String::new(), String::new()),
    }
}

fn grid_for(m_max: Option<usize>, kick_amplitude: f64, kicks: u64) -> Grid {
    m_max
        .map(Grid::new)
        .unwrap_or_else(|| Grid::sized_for(kick_amplitude, kicks))
}

/// Time evolution of the current: one `evolve_P*.csv` per kick amplitude.
pub fn cmd_evolve(cfg: &EvolveConfig, out: &Path) -> Result<(), CliError> {
    cfg.validate()?;
    for &p in &cfg.kick_amplitudes {
        let params = ModelParams::from_kick_amplitude(p, cfg.alpha, cfg.hbar_over_pi * PI)
            .map_err(core_error)?;
        let grid = grid_for(cfg.m_max, p, cfg.kicks);
        let series =
            evolve(&params, grid, cfg.beta, cfg.kicks, cfg.record_every).map_err(core_error)?;
        let mut csv = String::from("l,mean_k,norm,energy\n");
        for entry in &series.entries {
            writeln!(csv, "{},{},{},{}", entry.kick, entry.mean_k, entry.norm, entry.energy)
                .expect("string write");
        }
        let name = format!("evolve_P{}.csv", number_token(p));
        write_csv(out, &name, "evolve", cfg, &csv)?;
    }
    Ok(())
}

/// Parameter sweep: `scan.csv` with one row per sample plus `peaks.csv`.
pub fn cmd_scan(cfg: &ScanConfig, out: &Path) -> Result<(), CliError> {
    cfg.validate()?;
    let values = cfg.values()?;
    let mut spec = match cfg.axis {
        Axis::HbarOverPi => ScanSpec::hbar_scan(values, cfg.kick_amplitude, cfg.alpha, cfg.kicks),
        Axis::KickAmplitude => {
            ScanSpec::amplitude_scan(values, cfg.hbar_over_pi * PI, cfg.alpha, cfg.kicks)
        }
    };
    spec.m_max = cfg.m_max;
    if let Some(sigma) = cfg.beta_sigma {
        spec.beta_spread = Some(BetaSpread {
            sigma,
            samples: cfg.beta_samples,
        });
    }
    let result = scan(&spec).map_err(core_error)?;
    let mut csv = String::from("param,mean_k,norm,r,s,error\n");
    for row in &result.rows {
        let (r, s) = label_cells(&row.label);
        writeln!(
            csv,
            "{},{},{},{},{},{}",
            row.param_value,
            row.mean_k.map(|v| v.to_string()).unwrap_or_default(),
            row.norm.map(|v| v.to_string()).unwrap_or_default(),
            r,
            s,
            error_cell(&row.error),
        )
        .expect("string write");
    }
    write_csv(out, "scan.csv", "scan", cfg, &csv)?;

    // a scan shorter than the detection window simply has no peaks
    let peaks = if result.rows.len() < cfg.peak_window {
        Vec::new()
    } else {
        detect_peaks(&result, cfg.peak_window, cfg.peak_ratio)
            .map_err(core_error)?
            .peaks
    };
    let mut csv = String::from("param,mean_k,r,s,prominence\n");
    for peak in &peaks {
        let (r, s) = label_cells(&peak.label);
        writeln!(
            csv,
            "{},{},{},{},{}",
            peak.param_value, peak.mean_k, r, s, peak.prominence
        )
        .expect("string write");
    }
    write_csv(out, "peaks.csv", "scan", cfg, &csv)?;
    Ok(())
}

#[derive(Serialize)]
struct ThresholdReport<'a> {
    k_thr_over_pi: f64,
    fraction_target: f64,
    bracket_lo_over_pi: f64,
    bracket_hi_over_pi: f64,
    config: &'a ClassicalConfig,
}

/// Phase portraits, chaotic fractions and the optional threshold bisection.
pub fn cmd_classical(cfg: &ClassicalConfig, out: &Path) -> Result<(), CliError> {
    cfg.validate()?;
    for &k_over_pi in &cfg.kick_strengths_over_pi {
        let portrait = phase_portrait(k_over_pi * PI, cfg.alpha, cfg.ic_side, cfg.steps_per_ic);
        let mut csv = String::from("x,p\n");
        for orbit in &portrait.orbits {
            for &(x, p) in orbit {
                writeln!(csv, "{x},{p}").expect("string write");
            }
        }
        let name = format!("portrait_K{}pi.csv", number_token(k_over_pi));
        write_csv(out, &name, "classical", cfg, &csv)?;
    }

    let estimator = ChaosEstimator {
        ic_side: cfg.estimator_ic_side,
        n_steps: cfg.estimator_steps,
        n_transient: cfg.estimator_transient,
        lambda_threshold: cfg.lambda_threshold,
    };
    let mut csv = String::from("k_over_pi,fraction\n");
    for &k_over_pi in &cfg.kick_strengths_over_pi {
        let fraction = chaos_fraction(k_over_pi * PI, cfg.alpha, &estimator);
        writeln!(csv, "{k_over_pi},{fraction}").expect("string write");
    }
    write_csv(out, "chaos_fraction.csv", "classical", cfg, &csv)?;

    if cfg.find_threshold {
        let k_thr = find_chaos_threshold(
            cfg.alpha,
            cfg.bracket_lo_over_pi * PI,
            cfg.bracket_hi_over_pi * PI,
            cfg.threshold_target,
            &estimator,
        )
        .map_err(core_error)?;
        let report = ThresholdReport {
            k_thr_over_pi: k_thr / PI,
            fraction_target: cfg.threshold_target,
            bracket_lo_over_pi: cfg.bracket_lo_over_pi,
            bracket_hi_over_pi: cfg.bracket_hi_over_pi,
            config: cfg,
        };
        write_json(out, "threshold.json", &report)?;
        println!("K_thr = {} pi", k_thr / PI);
    }
    Ok(())
}

#[derive(Serialize)]
struct FitReport<'a> {
    fit: Option<ScalingFit>,
    error: Option<String>,
    config: &'a BandsConfig,
}

/// Band counts below the barrier per depth plus the power-law fit summary.
pub fn cmd_bands(cfg: &BandsConfig, out: &Path) -> Result<(), CliError> {
    cfg.validate()?;
    let depths = cfg.depth_list()?;
    let reports =
        band_count_sweep(&depths, cfg.alpha, cfg.m_max, cfg.beta_samples).map_err(core_error)?;
    let mut csv = String::from("depth,barrier,n_below\n");
    for report in &reports {
        writeln!(csv, "{},{},{}", report.depth, report.barrier, report.n_below)
            .expect("string write");
    }
    write_csv(out, "band_counts.csv", "bands", cfg, &csv)?;

    // counts are still emitted when the fit is impossible (too few points)
    let report = match fit_sqrt_scaling(&reports) {
        Ok(fit) => FitReport {
            fit: Some(fit),
            error: None,
            config: cfg,
        },
        Err(err) => FitReport {
            fit: None,
            error: Some(err.to_string()),
            config: cfg,
        },
    };
    write_json(out, "fit.json", &report)?;
    Ok(())
}

/// Acceleration rate against P: one `gamma_hbar*pi.csv` per hbar_eff.
pub fn cmd_gamma(cfg: &GammaConfig, out: &Path) -> Result<(), CliError> {
    cfg.validate()?;
    let p_values = cfg.p_values()?;
    for &h_over_pi in &cfg.hbar_over_pi {
        let rows: Vec<(f64, Result<f64, String>)> = p_values
            .par_iter()
            .map(|&p| {
                let outcome = ModelParams::from_kick_amplitude(p, cfg.alpha, h_over_pi * PI)
                    .and_then(|params| {
                        let grid = grid_for(cfg.m_max, p, cfg.kicks);
                        acceleration_rate(&params, grid, 0.0, cfg.kicks)
                    })
                    .map_err(|e| e.to_string());
                (p, outcome)
            })
            .collect();
        let mut csv = String::from("p,gamma,error\n");
        for (p, outcome) in &rows {
            match outcome {
                Ok(gamma) => writeln!(csv, "{p},{gamma},").expect("string write"),
                Err(msg) => writeln!(csv, "{p},,{}", error_cell(&Some(msg.clone())))
                    .expect("string write"),
            }
        }
        let name = format!("gamma_hbar{}pi.csv", number_token(h_over_pi));
        write_csv(out, &name, "gamma", cfg, &csv)?;
    }
    Ok(())
}
