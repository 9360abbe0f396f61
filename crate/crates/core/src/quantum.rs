//! Split-operator propagation on the integer momentum ladder.
//!
//! One kick period is `exp(-i hbar_eff k^2 / 2) exp(-i P [sin x + alpha sin 2x])`:
//! the kick is applied pointwise in the position representation, the free
//! flight is diagonal in momentum. The two representations are exchanged by
//! the exact N-point discrete Fourier transform with unitary normalization,
//! so norm checks are representation independent.

use crate::error::RatchetError;
use crate::model::{potential_shape, Grid, ModelParams};
use crate::Result;
use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

/// Edge-population threshold above which an evolution aborts instead of
/// silently wrapping momentum around the truncated ladder.
pub const ALIASING_THRESHOLD: f64 = 1e-8;

/// Largest ladder accepted by the dense matrix oracle.
pub const DENSE_ORACLE_MAX_N: usize = 512;

/// Complex amplitudes on the momentum ladder `m + beta`, m in [-m_max, m_max].
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    amplitudes: Vec<Complex64>,
    beta: f64,
    grid: Grid,
}

impl QuantumState {
    /// Wraps raw amplitudes; length must match the grid.
    pub fn from_amplitudes(grid: Grid, beta: f64, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != grid.len() {
            return Err(RatchetError::MismatchedLengths {
                left: amplitudes.len(),
                right: grid.len(),
            });
        }
        Ok(Self {
            amplitudes,
            beta,
            grid,
        })
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Amplitude of ladder slot `m` (0 outside the truncation).
    pub fn amplitude(&self, m: i64) -> Complex64 {
        let idx = m + self.grid.m_max() as i64;
        if idx < 0 || idx >= self.grid.len() as i64 {
            Complex64::new(0.0, 0.0)
        } else {
            self.amplitudes[idx as usize]
        }
    }

    pub fn norm_sq(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Ratchet current: expectation value of the wavenumber, `sum (m + beta) |c_m|^2`.
    pub fn current(&self) -> f64 {
        self.amplitudes
            .iter()
            .enumerate()
            .map(|(i, c)| (self.grid.momentum(i) as f64 + self.beta) * c.norm_sqr())
            .sum()
    }

    /// Kinetic energy `(hbar_eff^2 / 2) sum (m + beta)^2 |c_m|^2`.
    pub fn energy(&self, params: &ModelParams) -> f64 {
        let second_moment: f64 = self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let k = self.grid.momentum(i) as f64 + self.beta;
                k * k * c.norm_sqr()
            })
            .sum();
        0.5 * params.hbar_eff * params.hbar_eff * second_moment
    }

    /// Population of the two outermost ladder slots.
    pub fn edge_population(&self) -> f64 {
        self.amplitudes[0].norm_sqr() + self.amplitudes[self.grid.len() - 1].norm_sqr()
    }
}

/// Spatially uniform state in the `beta` ladder: all weight on m = 0.
pub fn init_uniform(grid: Grid, beta: f64) -> Result<QuantumState> {
    if !(0.0..1.0).contains(&beta) {
        return Err(RatchetError::InvalidParameter {
            name: "beta",
            value: beta,
        });
    }
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); grid.len()];
    amplitudes[grid.m_max()] = Complex64::new(1.0, 0.0);
    Ok(QuantumState {
        amplitudes,
        beta,
        grid,
    })
}

/// One-kick-period propagator with cached FFT plans and phase tables.
pub struct Propagator {
    grid: Grid,
    kick_phase: Vec<Complex64>,
    free_phase: Vec<Complex64>,
    fft_forward: Arc<dyn Fft<f64>>,
    fft_inverse: Arc<dyn Fft<f64>>,
}

impl Propagator {
    /// Phase tables are cached for one quasi-momentum `beta`.
    pub fn new(params: &ModelParams, grid: Grid, beta: f64) -> Self {
        let n = grid.len();
        let kick_phase: Vec<Complex64> = (0..n)
            .map(|j| {
                let phase = -params.kick_amplitude * potential_shape(grid.position(j), params.alpha);
                Complex64::from_polar(1.0, phase)
            })
            .collect();
        let free_phase: Vec<Complex64> = (0..n)
            .map(|i| {
                let k = grid.momentum(i) as f64 + beta;
                Complex64::from_polar(1.0, -0.5 * params.hbar_eff * k * k)
            })
            .collect();
        let mut planner = FftPlanner::new();
        Propagator {
            grid,
            kick_phase,
            free_phase,
            fft_forward: planner.plan_fft_forward(n),
            fft_inverse: planner.plan_fft_inverse(n),
        }
    }

    /// Kick operator: to position nodes, multiply by `exp(-i P f(x_j))`, back.
    pub fn apply_kick(&self, state: &mut QuantumState) {
        let n = self.grid.len();
        let m_max = self.grid.m_max();
        let buf = &mut state.amplitudes;
        // ladder order -> DFT frequency order
        buf.rotate_left(m_max);
        // psi_j = sum_m c_m e^{+i m x_j} (unnormalized inverse transform)
        self.fft_inverse.process(buf);
        for (value, phase) in buf.iter_mut().zip(&self.kick_phase) {
            *value *= phase;
        }
        self.fft_forward.process(buf);
        let scale = 1.0 / n as f64;
        for value in buf.iter_mut() {
            *value *= scale;
        }
        buf.rotate_right(m_max);
    }

    /// Free flight: diagonal phases `exp(-i hbar_eff (m + beta)^2 / 2)`.
    pub fn apply_free(&self, state: &mut QuantumState) {
        for (value, phase) in state.amplitudes.iter_mut().zip(&self.free_phase) {
            *value *= phase;
        }
    }

    /// One full kick period: kick first, then free flight.
    pub fn step(&self, state: &mut QuantumState) {
        self.apply_kick(state);
        self.apply_free(state);
    }
}

/// Kick operator as a pure function. Builds a one-shot [`Propagator`];
/// long evolutions should reuse one instead.
pub fn apply_kick(state: &QuantumState, params: &ModelParams) -> QuantumState {
    let mut out = state.clone();
    Propagator::new(params, state.grid, state.beta).apply_kick(&mut out);
    out
}

/// Free flight as a pure function.
pub fn apply_free(state: &QuantumState, params: &ModelParams) -> QuantumState {
    let mut out = state.clone();
    Propagator::new(params, state.grid, state.beta).apply_free(&mut out);
    out
}

/// One full kick period as a pure function.
pub fn step(state: &QuantumState, params: &ModelParams) -> QuantumState {
    let mut out = state.clone();
    Propagator::new(params, state.grid, state.beta).step(&mut out);
    out
}

/// Independent correctness oracle for [`step`]: builds the kick matrix
/// `<m| exp(-i P f(x)) |m'>` by direct quadrature and applies it with an
/// explicit matrix-vector product, then the diagonal free phases.
pub fn dense_oracle_step(state: &QuantumState, params: &ModelParams) -> Result<QuantumState> {
    let n = state.grid.len();
    if n > DENSE_ORACLE_MAX_N {
        return Err(RatchetError::GridTooLarge {
            n,
            limit: DENSE_ORACLE_MAX_N,
        });
    }
    let kick = dense_kick_matrix(params, state.grid);
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for (row, target) in out.iter_mut().enumerate() {
        let mut acc = Complex64::new(0.0, 0.0);
        for col in 0..n {
            acc += kick[row * n + col] * state.amplitudes[col];
        }
        *target = acc;
    }
    for (i, value) in out.iter_mut().enumerate() {
        let k = state.grid.momentum(i) as f64 + state.beta;
        *value *= Complex64::from_polar(1.0, -0.5 * params.hbar_eff * k * k);
    }
    QuantumState::from_amplitudes(state.grid, state.beta, out)
}

/// Kick matrix in row-major order, entry (m, m') = kappa_{m - m'} with
/// kappa the discrete Fourier coefficients of `exp(-i P f(x))` sampled on
/// the N position nodes.  Quadrature on exactly the N nodes makes the
/// matrix circulant in m - m' (mod N) and hence exactly unitary, so the
/// oracle reproduces the split-operator step to rounding error for any
/// kick amplitude.
pub fn dense_kick_matrix(params: &ModelParams, grid: Grid) -> Vec<Complex64> {
    let n = grid.len();
    // kappa_d for d in [-(n-1), n-1]; e^{-i d x_j} is N-periodic in d on
    // the grid nodes, so aliased orders fold in automatically.
    let mut kappa = vec![Complex64::new(0.0, 0.0); 2 * n - 1];
    for (offset, value) in kappa.iter_mut().enumerate() {
        let d = offset as i64 - (n as i64 - 1);
        let mut acc = Complex64::new(0.0, 0.0);
        for q in 0..n {
            let x = 2.0 * std::f64::consts::PI * q as f64 / n as f64;
            let phase = -params.kick_amplitude * potential_shape(x, params.alpha) - d as f64 * x;
            acc += Complex64::from_polar(1.0, phase);
        }
        *value = acc / n as f64;
    }
    let mut matrix = vec![Complex64::new(0.0, 0.0); n * n];
    for row in 0..n {
        for col in 0..n {
            let d = row as i64 - col as i64;
            matrix[row * n + col] = kappa[(d + n as i64 - 1) as usize];
        }
    }
    matrix
}

/// One recorded point of an evolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurrentEntry {
    pub kick: u64,
    pub mean_k: f64,
    pub norm: f64,
    pub energy: f64,
}

/// Ratchet current, norm and energy versus kick count.
#[derive(Debug, Clone, PartialEq)]
pub struct CurrentSeries {
    pub entries: Vec<CurrentEntry>,
}

impl CurrentSeries {
    pub fn last(&self) -> &CurrentEntry {
        self.entries.last().expect("series is never empty")
    }

    /// Entry recorded at kick `l`, if any.
    pub fn at(&self, l: u64) -> Option<&CurrentEntry> {
        self.entries.iter().find(|e| e.kick == l)
    }
}

/// Iterates the quantum map from the uniform state, recording
/// `(l, <k>, norm, energy)` at l = 0, every `record_every` kicks, and at
/// `l_max`. Aborts with [`RatchetError::AliasingGuard`] if momentum
/// population reaches the ladder edge.
pub fn evolve(
    params: &ModelParams,
    grid: Grid,
    beta: f64,
    l_max: u64,
    record_every: u64,
) -> Result<CurrentSeries> {
    if l_max < 1 {
        return Err(RatchetError::InvalidParameter {
            name: "l_max",
            value: l_max as f64,
        });
    }
    if record_every < 1 {
        return Err(RatchetError::InvalidParameter {
            name: "record_every",
            value: record_every as f64,
        });
    }
    let mut state = init_uniform(grid, beta)?;
    let propagator = Propagator::new(params, grid, beta);
    let mut entries = Vec::with_capacity((l_max / record_every + 2) as usize);
    let record = |state: &QuantumState, kick: u64| CurrentEntry {
        kick,
        mean_k: state.current(),
        norm: state.norm_sq(),
        energy: state.energy(params),
    };
    entries.push(record(&state, 0));
    for l in 1..=l_max {
        propagator.step(&mut state);
        let edge = state.edge_population();
        if edge > ALIASING_THRESHOLD {
            return Err(RatchetError::AliasingGuard {
                kick: l,
                edge,
                threshold: ALIASING_THRESHOLD,
            });
        }
        if l % record_every == 0 || l == l_max {
            entries.push(record(&state, l));
        }
    }
    Ok(CurrentSeries { entries })
}

/// Incoherent weighted average of [`evolve`] over a set of quasi-momenta.
/// Ladders with different `beta` never couple, so each evolves independently
/// (in parallel) and only the recorded observables are averaged.
pub fn quasimomentum_average(
    params: &ModelParams,
    grid: Grid,
    betas: &[f64],
    weights: &[f64],
    l_max: u64,
    record_every: u64,
) -> Result<CurrentSeries> {
    if betas.len() != weights.len() {
        return Err(RatchetError::MismatchedLengths {
            left: betas.len(),
            right: weights.len(),
        });
    }
    if betas.is_empty() {
        return Err(RatchetError::TooFewPoints {
            required: 1,
            got: 0,
        });
    }
    let sum: f64 = weights.iter().sum();
    if weights.iter().any(|w| *w < 0.0) || (sum - 1.0).abs() > 1e-10 {
        return Err(RatchetError::InvalidWeights { sum });
    }
    let series: Vec<CurrentSeries> = betas
        .par_iter()
        .map(|&beta| evolve(params, grid, beta, l_max, record_every))
        .collect::<Result<_>>()?;
    let mut entries = series[0].entries.clone();
    for entry in entries.iter_mut() {
        entry.mean_k = 0.0;
        entry.norm = 0.0;
        entry.energy = 0.0;
    }
    for (run, &weight) in series.iter().zip(weights) {
        for (avg, entry) in entries.iter_mut().zip(&run.entries) {
            debug_assert_eq!(avg.kick, entry.kick);
            avg.mean_k += weight * entry.mean_k;
            avg.norm += weight * entry.norm;
            avg.energy += weight * entry.energy;
        }
    }
    Ok(CurrentSeries { entries })
}

/// Quasi-momentum samples and weights for a Gaussian spread of width `sigma`
/// about zero, truncated at three sigma and folded into [0, 1).
pub fn gaussian_beta_samples(sigma: f64, count: usize) -> (Vec<f64>, Vec<f64>) {
    if count <= 1 || sigma == 0.0 {
        return (vec![0.0], vec![1.0]);
    }
    let mut betas = Vec::with_capacity(count);
    let mut weights = Vec::with_capacity(count);
    for i in 0..count {
        let q = -3.0 * sigma + 6.0 * sigma * i as f64 / (count - 1) as f64;
        betas.push(q.rem_euclid(1.0));
        weights.push((-0.5 * (q / sigma) * (q / sigma)).exp());
    }
    let total: f64 = weights.iter().sum();
    for w in weights.iter_mut() {
        *w /= total;
    }
    (betas, weights)
}
