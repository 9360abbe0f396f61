//! Bloch bands of the static ratchet potential.
//!
//! The Hamiltonian is `-(1/2) d^2/dx^2 + depth [sin x + alpha sin 2x]` on the
//! 2 pi cell, diagonalized in the plane-wave basis `e^{i (m + beta) x}`. Bands
//! whose maximum over quasi-momentum stays below the potential barrier are
//! counted, and the count follows the semiclassical square-root growth in the
//! well depth.

use crate::error::RatchetError;
use crate::fit::fit_line;
use crate::model::barrier_height;
use crate::Result;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Default plane-wave cutoff for band computations.
pub const DEFAULT_BAND_M_MAX: usize = 128;
/// Default number of quasi-momentum samples in [0, 1).
pub const DEFAULT_BETA_SAMPLES: usize = 33;

/// Band energies E_n(beta), ascending in n for every sampled beta.
#[derive(Debug, Clone, PartialEq)]
pub struct BlochSpectrum {
    pub beta_samples: Vec<f64>,
    /// `energies[b][n]` is band n at `beta_samples[b]`.
    pub energies: Vec<Vec<f64>>,
}

impl BlochSpectrum {
    pub fn n_bands(&self) -> usize {
        self.energies.first().map_or(0, Vec::len)
    }

    /// Maximum of band `n` over the sampled quasi-momenta.
    pub fn band_max(&self, n: usize) -> f64 {
        self.energies
            .iter()
            .map(|row| row[n])
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn band_min(&self, n: usize) -> f64 {
        self.energies
            .iter()
            .map(|row| row[n])
            .fold(f64::INFINITY, f64::min)
    }
}

/// Band count below the potential barrier for one well depth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandCountReport {
    pub depth: f64,
    pub barrier: f64,
    pub n_below: usize,
}

/// Plane-wave Bloch Hamiltonian at quasi-momentum `beta`.
///
/// Diagonal `(m + beta)^2 / 2`; `sin x` couples `|delta m| = 1` with strength
/// `-+ i depth / 2` and `sin 2x` couples `|delta m| = 2` with `-+ i depth
/// alpha / 2`, signs fixed by the Fourier expansion of sine. Hermitian by
/// construction.
pub fn build_bloch_hamiltonian(
    depth: f64,
    alpha: f64,
    beta: f64,
    m_max: usize,
) -> DMatrix<Complex64> {
    let n = 2 * m_max + 1;
    let mut h = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
    for i in 0..n {
        let k = i as f64 - m_max as f64 + beta;
        h[(i, i)] = Complex64::new(0.5 * k * k, 0.0);
    }
    // sin x = (e^{ix} - e^{-ix}) / 2i: <m|sin x|m'> = (d_{m,m'+1} - d_{m,m'-1}) / 2i
    for i in 0..n - 1 {
        h[(i, i + 1)] += Complex64::new(0.0, -0.5 * depth);
        h[(i + 1, i)] += Complex64::new(0.0, 0.5 * depth);
    }
    for i in 0..n.saturating_sub(2) {
        h[(i, i + 2)] += Complex64::new(0.0, -0.5 * depth * alpha);
        h[(i + 2, i)] += Complex64::new(0.0, 0.5 * depth * alpha);
    }
    h
}

/// Ascending eigenvalues of the Bloch Hamiltonian.
pub fn bloch_eigenvalues(depth: f64, alpha: f64, beta: f64, m_max: usize) -> Vec<f64> {
    let h = build_bloch_hamiltonian(depth, alpha, beta, m_max);
    let mut values: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(|a, b| a.partial_cmp(b).expect("real spectrum"));
    values
}

/// Lowest `n_bands` bands over `beta_samples` uniform quasi-momenta in [0, 1).
pub fn band_energies(
    depth: f64,
    alpha: f64,
    n_bands: usize,
    beta_samples: usize,
    m_max: usize,
) -> Result<BlochSpectrum> {
    if n_bands > 2 * m_max {
        return Err(RatchetError::InvalidParameter {
            name: "n_bands",
            value: n_bands as f64,
        });
    }
    if beta_samples == 0 {
        return Err(RatchetError::InvalidParameter {
            name: "beta_samples",
            value: 0.0,
        });
    }
    let betas: Vec<f64> = (0..beta_samples)
        .map(|b| b as f64 / beta_samples as f64)
        .collect();
    let energies: Vec<Vec<f64>> = betas
        .par_iter()
        .map(|&beta| {
            let mut values = bloch_eigenvalues(depth, alpha, beta, m_max);
            values.truncate(n_bands);
            values
        })
        .collect();
    Ok(BlochSpectrum {
        beta_samples: betas,
        energies,
    })
}

/// Checks the plane-wave cutoff: every requested band must move by less than
/// 1e-8 when the cutoff doubles.
pub fn verify_cutoff(depth: f64, alpha: f64, n_bands: usize, m_max: usize) -> Result<()> {
    let coarse = bloch_eigenvalues(depth, alpha, 0.5, m_max);
    let fine = bloch_eigenvalues(depth, alpha, 0.5, 2 * m_max);
    for n in 0..n_bands.min(coarse.len()) {
        let shift = (coarse[n] - fine[n]).abs();
        if shift > 1e-8 {
            return Err(RatchetError::InvalidParameter {
                name: "m_max",
                value: m_max as f64,
            });
        }
    }
    Ok(())
}

/// Counts bands whose maximum over quasi-momentum lies strictly below the
/// barrier `barrier_height(depth, alpha)`. Ties count as not below.
pub fn count_bands_below_barrier(
    depth: f64,
    alpha: f64,
    m_max: usize,
    beta_samples: usize,
) -> Result<BandCountReport> {
    let barrier = barrier_height(depth, alpha);
    let spectrum = band_energies(depth, alpha, 2 * m_max, beta_samples, m_max)?;
    let mut n_below = 0;
    for n in 0..spectrum.n_bands() {
        if spectrum.band_max(n) < barrier {
            n_below += 1;
        } else {
            break;
        }
    }
    Ok(BandCountReport {
        depth,
        barrier,
        n_below,
    })
}

/// Power-law fit of the below-barrier band count against the well depth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub exponent: f64,
    pub prefactor: f64,
    pub r_squared: f64,
}

/// Least-squares fit of `log n_below` against `log depth`, zero counts
/// excluded. Needs at least three nonzero counts.
pub fn fit_sqrt_scaling(reports: &[BandCountReport]) -> Result<ScalingFit> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for report in reports {
        if report.n_below > 0 {
            xs.push(report.depth.ln());
            ys.push((report.n_below as f64).ln());
        }
    }
    if xs.len() < 3 {
        return Err(RatchetError::TooFewPoints {
            required: 3,
            got: xs.len(),
        });
    }
    let fit = fit_line(&xs, &ys);
    Ok(ScalingFit {
        exponent: fit.slope,
        prefactor: fit.intercept.exp(),
        r_squared: fit.r_squared,
    })
}

/// Band counts over a list of depths, parallel with index-ordered assembly.
pub fn band_count_sweep(
    depths: &[f64],
    alpha: f64,
    m_max: usize,
    beta_samples: usize,
) -> Result<Vec<BandCountReport>> {
    depths
        .par_iter()
        .map(|&depth| count_bands_below_barrier(depth, alpha, m_max, beta_samples))
        .collect()
}

/// Log-spaced depth grid, inclusive of both endpoints.
pub fn log_spaced(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    (0..count)
        .map(|i| (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (count - 1) as f64).exp())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn hamiltonian_is_hermitian() {
        for (depth, alpha, beta) in [(0.0, 0.0, 0.0), (5.0, 0.3, 0.25), (42.0, 0.7, 0.9)] {
            let h = build_bloch_hamiltonian(depth, alpha, beta, 16);
            let dag = h.adjoint();
            assert_eq!(h, dag);
        }
    }

    #[test]
    fn free_particle_bands_are_folded_parabolas() {
        let spectrum = band_energies(0.0, 0.3, 3, 9, 16).unwrap();
        for (b, row) in spectrum.beta_samples.iter().zip(&spectrum.energies) {
            // lowest band of the free particle: min over m of (m + beta)^2 / 2
            let expect = (-2i64..=2)
                .map(|m| 0.5 * (m as f64 + b) * (m as f64 + b))
                .fold(f64::INFINITY, f64::min);
            assert_relative_eq!(row[0], expect, epsilon = 1e-10);
        }
        // band-1 maximum over beta is 1/8, reached at beta = 1/2
        let spectrum = band_energies(0.0, 0.0, 1, 32, 16).unwrap();
        assert_relative_eq!(spectrum.band_max(0), 0.125, epsilon = 1e-10);
    }

    #[test]
    fn band_ordering_invariant() {
        let spectrum = band_energies(20.0, 0.3, 10, 9, 32).unwrap();
        for row in &spectrum.energies {
            for pair in row.windows(2) {
                assert!(pair[0] <= pair[1]);
            }
        }
    }

    #[test]
    fn deep_well_lowest_band_is_flat() {
        let spectrum = band_energies(50.0, 0.3, 1, 17, 64).unwrap();
        let spread = spectrum.band_max(0) - spectrum.band_min(0);
        assert!(spread < 1e-3 * 50.0, "spread = {spread:e}");
    }

    #[test]
    fn no_bands_below_zero_barrier() {
        let report = count_bands_below_barrier(0.0, 0.3, 16, 9).unwrap();
        assert_eq!(report.n_below, 0);
        assert_eq!(report.barrier, 0.0);
    }

    #[test]
    fn count_monotone_in_depth() {
        let shallow = count_bands_below_barrier(100.0, 0.3, 96, 9).unwrap();
        let deep = count_bands_below_barrier(200.0, 0.3, 96, 9).unwrap();
        assert!(deep.n_below >= shallow.n_below);
        assert!(shallow.n_below > 0);
    }

    #[test]
    fn cutoff_check() {
        assert!(verify_cutoff(10.0, 0.3, 5, 32).is_ok());
        assert!(verify_cutoff(200.0, 0.3, 20, 8).is_err());
    }

    #[test]
    fn planted_sqrt_law_recovered() {
        let depths = log_spaced(5.0, 200.0, 10);
        let reports: Vec<BandCountReport> = depths
            .iter()
            .map(|&depth| BandCountReport {
                depth,
                barrier: 0.0,
                n_below: (2.0 * depth.sqrt()).round() as usize,
            })
            .collect();
        let fit = fit_sqrt_scaling(&reports).unwrap();
        assert!((fit.exponent - 0.5).abs() < 0.05, "exponent = {}", fit.exponent);
    }

    #[test]
    fn fit_needs_three_nonzero_counts() {
        let reports = vec![
            BandCountReport { depth: 1.0, barrier: 0.0, n_below: 0 },
            BandCountReport { depth: 2.0, barrier: 0.0, n_below: 1 },
            BandCountReport { depth: 4.0, barrier: 0.0, n_below: 2 },
        ];
        assert!(matches!(
            fit_sqrt_scaling(&reports),
            Err(RatchetError::TooFewPoints { .. })
        ));
    }
}
