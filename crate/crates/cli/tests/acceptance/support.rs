//! Real-space finite-difference oracle for the Bloch band problem, kept
//! independent of the plane-wave code under test.

use nalgebra::DMatrix;
use std::f64::consts::TAU;

/// Lowest `n_bands` Bloch energies of `-(1/2) d^2/dx^2 + depth [sin x +
/// alpha sin 2x]` from central differences on `n` and `2n` nodes with
/// Richardson extrapolation (cancels the O(h^2) error term).
///
/// Only beta = 0 (periodic) and beta = 1/2 (antiperiodic) keep the wrapped
/// matrix entries real, which is all the cross-check needs.
pub fn fd_band_energies(
    depth: f64,
    alpha: f64,
    beta_half: bool,
    n: usize,
    n_bands: usize,
) -> Vec<f64> {
    let coarse = fd_eigenvalues(depth, alpha, beta_half, n, n_bands);
    let fine = fd_eigenvalues(depth, alpha, beta_half, 2 * n, n_bands);
    coarse
        .iter()
        .zip(&fine)
        .map(|(c, f)| (4.0 * f - c) / 3.0)
        .collect()
}

fn fd_eigenvalues(depth: f64, alpha: f64, beta_half: bool, n: usize, n_bands: usize) -> Vec<f64> {
    let h = TAU / n as f64;
    let off = -0.5 / (h * h);
    let mut matrix = DMatrix::<f64>::zeros(n, n);
    for j in 0..n {
        let x = h * j as f64;
        matrix[(j, j)] = 1.0 / (h * h) + depth * (x.sin() + alpha * (2.0 * x).sin());
        let k = (j + 1) % n;
        // antiperiodic wrap for beta = 1/2
        let sign = if k == 0 && beta_half { -1.0 } else { 1.0 };
        matrix[(j, k)] += off * sign;
        matrix[(k, j)] += off * sign;
    }
    let mut values: Vec<f64> = matrix.symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(|a, b| a.partial_cmp(b).expect("real spectrum"));
    values.truncate(n_bands);
    values
}
