//! Classical kicked-ratchet map, phase portraits and chaos diagnostics.
//!
//! The map is `p' = p - K [cos x + 2 alpha cos 2x]`, `x' = x + p'`, with x
//! reduced mod 2 pi. Momentum is left unbounded in trajectories; it is reduced
//! mod 2 pi only for plotting and for IC classification, which the map allows
//! because it commutes with p -> p + 2 pi.

use crate::error::RatchetError;
use crate::Result;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

const TAU: f64 = 2.0 * PI;

/// Tangent-space displacement carried along a trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tangent {
    pub dx: f64,
    pub dp: f64,
}

impl Tangent {
    pub fn norm(&self) -> f64 {
        self.dx.hypot(self.dp)
    }
}

/// Phase-space point, optionally with a tangent vector for Lyapunov runs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalState {
    pub x: f64,
    pub p: f64,
    pub tangent: Option<Tangent>,
}

impl ClassicalState {
    pub fn new(x: f64, p: f64) -> Self {
        Self {
            x: x.rem_euclid(TAU),
            p,
            tangent: None,
        }
    }

    pub fn with_tangent(x: f64, p: f64, dx: f64, dp: f64) -> Self {
        Self {
            x: x.rem_euclid(TAU),
            p,
            tangent: Some(Tangent { dx, dp }),
        }
    }
}

/// One iteration of the kicked-ratchet map. The tangent vector, if present,
/// is dropped; use [`tangent_step`] to carry it.
pub fn map_step(state: &ClassicalState, kick_strength: f64, alpha: f64) -> ClassicalState {
    let p_next = state.p - kick_strength * (state.x.cos() + 2.0 * alpha * (2.0 * state.x).cos());
    let x_next = (state.x + p_next).rem_euclid(TAU);
    ClassicalState {
        x: x_next,
        p: p_next,
        tangent: None,
    }
}

/// Exact inverse of [`map_step`] (used by the reversibility tests).
pub fn map_step_inverse(state: &ClassicalState, kick_strength: f64, alpha: f64) -> ClassicalState {
    let x_prev = (state.x - state.p).rem_euclid(TAU);
    let p_prev = state.p + kick_strength * (x_prev.cos() + 2.0 * alpha * (2.0 * x_prev).cos());
    ClassicalState {
        x: x_prev,
        p: p_prev,
        tangent: None,
    }
}

/// Map iteration together with the exact Jacobian action on the tangent:
/// `dp' = dp + K [sin x + 4 alpha sin 2x] dx`, `dx' = dx + dp'`.
/// The Jacobian has unit determinant (the map is symplectic).
pub fn tangent_step(
    state: &ClassicalState,
    kick_strength: f64,
    alpha: f64,
) -> Result<ClassicalState> {
    let tangent = state.tangent.ok_or(RatchetError::MissingTangent)?;
    let dp_next =
        tangent.dp + kick_strength * (state.x.sin() + 4.0 * alpha * (2.0 * state.x).sin()) * tangent.dx;
    let dx_next = tangent.dx + dp_next;
    let mut next = map_step(state, kick_strength, alpha);
    next.tangent = Some(Tangent {
        dx: dx_next,
        dp: dp_next,
    });
    Ok(next)
}

/// Maximal Lyapunov exponent by tangent renormalization. The first
/// `n_transient` iterations align the tangent without being counted.
pub fn lyapunov(
    ic: &ClassicalState,
    kick_strength: f64,
    alpha: f64,
    n_steps: u64,
    n_transient: u64,
) -> f64 {
    let mut state = *ic;
    if state.tangent.is_none() {
        state.tangent = Some(Tangent { dx: 1.0, dp: 0.0 });
    }
    let mut log_growth = 0.0;
    for l in 0..(n_steps + n_transient) {
        state = tangent_step(&state, kick_strength, alpha).expect("tangent present");
        let tangent = state.tangent.as_mut().expect("tangent present");
        let norm = tangent.norm();
        tangent.dx /= norm;
        tangent.dp /= norm;
        if l >= n_transient {
            log_growth += norm.ln();
        }
    }
    log_growth / n_steps as f64
}

/// Collected (x, p mod 2 pi) samples from a grid of initial conditions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhasePortrait {
    pub kick_strength: f64,
    pub alpha: f64,
    pub ic_side: usize,
    pub steps_per_ic: u64,
    /// One orbit per initial condition, in row-major IC-grid order.
    pub orbits: Vec<Vec<(f64, f64)>>,
}

/// Iterates a `ic_side` x `ic_side` uniform grid of initial conditions over
/// the torus and collects the reduced phase-space points.
pub fn phase_portrait(
    kick_strength: f64,
    alpha: f64,
    ic_side: usize,
    steps_per_ic: u64,
) -> PhasePortrait {
    let ics = ic_grid(ic_side);
    let orbits: Vec<Vec<(f64, f64)>> = ics
        .par_iter()
        .map(|ic| {
            let mut state = *ic;
            let mut orbit = Vec::with_capacity(steps_per_ic as usize);
            for _ in 0..steps_per_ic {
                state = map_step(&state, kick_strength, alpha);
                orbit.push((state.x, state.p.rem_euclid(TAU)));
            }
            orbit
        })
        .collect();
    PhasePortrait {
        kick_strength,
        alpha,
        ic_side,
        steps_per_ic,
        orbits,
    }
}

/// Finite-time Lyapunov classifier settings for chaotic-fraction estimates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChaosEstimator {
    pub ic_side: usize,
    pub n_steps: u64,
    pub n_transient: u64,
    /// An IC with Lyapunov exponent above this counts as chaotic. KAM orbits
    /// fall off as log(n)/n, well below it at 10^4 steps.
    pub lambda_threshold: f64,
}

impl Default for ChaosEstimator {
    fn default() -> Self {
        Self {
            ic_side: 64,
            n_steps: 10_000,
            n_transient: 200,
            lambda_threshold: 0.05,
        }
    }
}

/// Fraction of the IC grid whose maximal Lyapunov exponent exceeds the
/// threshold. Deterministic; parallel over ICs.
pub fn chaos_fraction(kick_strength: f64, alpha: f64, estimator: &ChaosEstimator) -> f64 {
    let ics = ic_grid(estimator.ic_side);
    let chaotic = ics
        .par_iter()
        .filter(|ic| {
            lyapunov(
                ic,
                kick_strength,
                alpha,
                estimator.n_steps,
                estimator.n_transient,
            ) > estimator.lambda_threshold
        })
        .count();
    chaotic as f64 / ics.len() as f64
}

/// Bisection on K for the kick strength where the chaotic fraction first
/// reaches `fraction_target`. Stops once the bracket is narrower than
/// 0.01 pi and returns the midpoint.
pub fn find_chaos_threshold(
    alpha: f64,
    k_lo: f64,
    k_hi: f64,
    fraction_target: f64,
    estimator: &ChaosEstimator,
) -> Result<f64> {
    let f_lo = chaos_fraction(k_lo, alpha, estimator);
    let f_hi = chaos_fraction(k_hi, alpha, estimator);
    if !(f_lo < fraction_target && fraction_target <= f_hi) {
        return Err(RatchetError::InvalidBracket {
            f_lo,
            f_hi,
            target: fraction_target,
        });
    }
    let mut lo = k_lo;
    let mut hi = k_hi;
    while hi - lo >= 0.01 * PI {
        let mid = 0.5 * (lo + hi);
        if chaos_fraction(mid, alpha, estimator) >= fraction_target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn ic_grid(side: usize) -> Vec<ClassicalState> {
    let mut ics = Vec::with_capacity(side * side);
    for i in 0..side {
        for j in 0..side {
            ics.push(ClassicalState::new(
                TAU * j as f64 / side as f64,
                TAU * i as f64 / side as f64,
            ));
        }
    }
    ics
}
