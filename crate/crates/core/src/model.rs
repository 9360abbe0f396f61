//! Shared parameter types, the ratchet potential and the rational resonance
//! classifier.

use crate::error::RatchetError;
use crate::Result;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Default absolute tolerance on `|hbar_eff - 4 pi r / s|` for a resonance match.
pub const RESONANCE_TOL_ABS: f64 = 1e-9;
/// Default denominator cutoff for the resonance classifier.
pub const RESONANCE_S_MAX: u64 = 100;

/// Physical knobs of the kicked ratchet in scaled units.
///
/// The kick imprints the phase `kick_amplitude * [sin x + alpha sin 2x]`,
/// with `kick_amplitude = kick_strength / hbar_eff`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Kick strength K.
    pub kick_strength: f64,
    /// Skewness ratio of the second lattice harmonic to the first.
    pub alpha: f64,
    /// Effective Planck constant, > 0.
    pub hbar_eff: f64,
    /// Kick phase amplitude P = K / hbar_eff.
    pub kick_amplitude: f64,
}

impl ModelParams {
    /// Builds from kick strength K; P is derived.
    pub fn new(kick_strength: f64, alpha: f64, hbar_eff: f64) -> Result<Self> {
        if !(hbar_eff > 0.0) {
            return Err(RatchetError::InvalidParameter {
                name: "hbar_eff",
                value: hbar_eff,
            });
        }
        if !(kick_strength >= 0.0) {
            return Err(RatchetError::InvalidParameter {
                name: "kick_strength",
                value: kick_strength,
            });
        }
        Ok(Self {
            kick_strength,
            alpha,
            hbar_eff,
            kick_amplitude: kick_strength / hbar_eff,
        })
    }

    /// Builds from the kick phase amplitude P; K is derived.
    pub fn from_kick_amplitude(kick_amplitude: f64, alpha: f64, hbar_eff: f64) -> Result<Self> {
        if !(hbar_eff > 0.0) {
            return Err(RatchetError::InvalidParameter {
                name: "hbar_eff",
                value: hbar_eff,
            });
        }
        if !(kick_amplitude >= 0.0) {
            return Err(RatchetError::InvalidParameter {
                name: "kick_amplitude",
                value: kick_amplitude,
            });
        }
        Ok(Self {
            kick_strength: kick_amplitude * hbar_eff,
            alpha,
            hbar_eff,
            kick_amplitude,
        })
    }
}

/// Symmetric momentum ladder m in [-m_max, m_max] with the matching N-point
/// position grid x_j = 2 pi j / N, N = 2 m_max + 1 (odd, so the two
/// representations are exact discrete-Fourier partners).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grid {
    m_max: usize,
}

impl Grid {
    pub fn new(m_max: usize) -> Self {
        Self { m_max }
    }

    /// Truncation chosen from the kick amplitude and the run length: momentum
    /// support grows by at most a few times P per kick, ballistic resonances
    /// only linearly. The aliasing guard is the backstop.
    pub fn sized_for(kick_amplitude: f64, l_max: u64) -> Self {
        let grown = (kick_amplitude * l_max as f64 * 8.0 / 10.0).ceil() as usize;
        Self::new(grown.max(512))
    }

    pub fn m_max(&self) -> usize {
        self.m_max
    }

    /// Number of momentum states, always odd.
    pub fn len(&self) -> usize {
        2 * self.m_max + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Momentum index of ladder slot `idx`.
    pub fn momentum(&self, idx: usize) -> i64 {
        idx as i64 - self.m_max as i64
    }

    /// Position node x_j.
    pub fn position(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.len() as f64
    }
}

/// Reduced rational classification of `hbar_eff / (4 pi)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ResonanceLabel {
    /// `hbar_eff = 4 pi r / s` with gcd(r, s) = 1.
    Resonant { r: u64, s: u64 },
    NonResonant,
}

impl ResonanceLabel {
    pub fn is_resonant(&self) -> bool {
        matches!(self, ResonanceLabel::Resonant { .. })
    }
}

/// Shape of the flashed potential, `sin x + alpha sin 2x`, 2 pi periodic.
pub fn potential_shape(x: f64, alpha: f64) -> f64 {
    x.sin() + alpha * (2.0 * x).sin()
}

/// Maximum of `depth * potential_shape` over one spatial period, located by a
/// coarse grid scan plus golden-section refinement. Accurate to 1e-10.
///
/// The shape is odd, so the height is `|depth|` times the shape maximum.
pub fn barrier_height(depth: f64, alpha: f64) -> f64 {
    depth.abs() * shape_maximum(alpha)
}

fn shape_maximum(alpha: f64) -> f64 {
    const COARSE: usize = 4096;
    let mut best_j = 0;
    let mut best = f64::NEG_INFINITY;
    for j in 0..COARSE {
        let x = 2.0 * PI * j as f64 / COARSE as f64;
        let v = potential_shape(x, alpha);
        if v > best {
            best = v;
            best_j = j;
        }
    }
    let h = 2.0 * PI / COARSE as f64;
    let x0 = 2.0 * PI * best_j as f64 / COARSE as f64;
    golden_max(|x| potential_shape(x, alpha), x0 - h, x0 + h)
}

fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > 1e-12 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    fc.max(fd)
}

/// Effective Planck constant from the recoil frequency and the pulse period.
pub fn hbar_from_physical(omega_recoil: f64, period: f64) -> Result<f64> {
    if !(omega_recoil > 0.0) {
        return Err(RatchetError::InvalidParameter {
            name: "omega_recoil",
            value: omega_recoil,
        });
    }
    if !(period > 0.0) {
        return Err(RatchetError::InvalidParameter {
            name: "period",
            value: period,
        });
    }
    Ok(8.0 * omega_recoil * period)
}

/// Classifies `hbar_eff` against the resonance condition `hbar_eff = 4 pi r / s`.
///
/// Walks the continued-fraction convergents of `hbar_eff / (4 pi)` and returns
/// the first convergent `r / s` with `s <= s_max` that reproduces `hbar_eff`
/// within `tol_abs`. Convergents are already in lowest terms.
pub fn classify_resonance(hbar_eff: f64, s_max: u64, tol_abs: f64) -> ResonanceLabel {
    if !(hbar_eff > 0.0) {
        return ResonanceLabel::NonResonant;
    }
    let target = hbar_eff / (4.0 * PI);

    // Convergent recurrence h_k = a_k h_{k-1} + h_{k-2}, same for denominators.
    let (mut h_prev, mut k_prev) = (0u64, 1u64);
    let (mut h, mut k) = (1u64, 0u64);
    let mut y = target;
    loop {
        let a = y.floor();
        if a < 0.0 || a > u64::MAX as f64 {
            return ResonanceLabel::NonResonant;
        }
        let a = a as u64;
        let (h_next, overflow_h) = match a.checked_mul(h).and_then(|v| v.checked_add(h_prev)) {
            Some(v) => (v, false),
            None => (0, true),
        };
        let k_next = match a.checked_mul(k).and_then(|v| v.checked_add(k_prev)) {
            Some(v) => v,
            None => return ResonanceLabel::NonResonant,
        };
        if overflow_h || k_next > s_max {
            return ResonanceLabel::NonResonant;
        }
        if h_next > 0 && (hbar_eff - 4.0 * PI * h_next as f64 / k_next as f64).abs() <= tol_abs {
            return ResonanceLabel::Resonant {
                r: h_next,
                s: k_next,
            };
        }
        let frac = y - a as f64;
        if frac < 1e-15 {
            return ResonanceLabel::NonResonant;
        }
        y = 1.0 / frac;
        h_prev = h;
        k_prev = k;
        h = h_next;
        k = k_next;
    }
}
