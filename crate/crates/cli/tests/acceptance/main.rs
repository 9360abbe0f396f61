//! Acceptance suite: one test per release criterion, each printing a single
//! pass/fail line (visible with `--nocapture`, or on failure).

mod support;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ratchet_core::bands::{band_count_sweep, bloch_eigenvalues, fit_sqrt_scaling, log_spaced};
use ratchet_core::classical::{
    chaos_fraction, find_chaos_threshold, map_step, tangent_step, ChaosEstimator, ClassicalState,
};
use ratchet_core::fit::fit_line;
use ratchet_core::sweep::{detect_peaks, scan, Peak, ScanSpec};
use ratchet_core::{
    classify_resonance, dense_oracle_step, evolve, init_uniform, step, Grid, ModelParams,
    QuantumState, ResonanceLabel,
};
use std::f64::consts::PI;
use std::path::Path;
use std::process::Command;

fn report(name: &str, ok: bool, detail: &str) {
    println!(
        "criterion {name}: {} — {detail}",
        if ok { "pass" } else { "FAIL" }
    );
    assert!(ok, "criterion {name} failed: {detail}");
}

#[test]
fn criterion_1_resonance_labeling() {
    let cases = [
        (0.7, 7, 40),
        (2.625, 21, 32),
        (1.5, 3, 8),
        (0.6, 3, 20),
        (1.125, 9, 32),
        (1.55, 31, 80),
        (3.3, 33, 40),
        // published table lists (1,16) here; 0.75 pi = 4 pi (3/16), and the
        // classifier returns the reduced fraction actually equal to it
        (0.75, 3, 16),
    ];
    let mut failures = Vec::new();
    for (h_over_pi, r, s) in cases {
        let label = classify_resonance(h_over_pi * PI, 100, 1e-9);
        if label != (ResonanceLabel::Resonant { r, s }) {
            failures.push(format!("{h_over_pi} pi -> {label:?}, want ({r},{s})"));
        }
    }
    report(
        "1 (resonance labeling)",
        failures.is_empty(),
        &if failures.is_empty() {
            "all (r,s) pairs reproduced".to_string()
        } else {
            failures.join("; ")
        },
    );
}

fn grid_values() -> Vec<f64> {
    (20..=800).map(|i| i as f64 * 0.005).collect()
}

fn near(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

#[test]
fn criterion_2_main_resonance_drift() {
    let spec = ScanSpec::hbar_scan(grid_values(), 0.5, 0.3, 200);
    let result = scan(&spec).expect("scan runs");
    let catalog = detect_peaks(&result, 9, 10.0).expect("peak detection");
    let targets = [0.5, 1.5, 2.5, 3.5];
    let found: Vec<bool> = targets
        .iter()
        .map(|&t| catalog.peaks.iter().any(|p| near(p.param_value, t, 1e-3)))
        .collect();
    let spurious: Vec<&Peak> = catalog
        .peaks
        .iter()
        .filter(|p| !targets.iter().any(|&t| near(p.param_value, t, 1e-3)))
        .collect();
    let ok = found.iter().all(|&f| f) && spurious.len() <= 2;
    report(
        "2 (main-resonance drift)",
        ok,
        &format!(
            "half-integer peaks found: {found:?}; spurious: {:?}",
            spurious.iter().map(|p| p.param_value).collect::<Vec<_>>()
        ),
    );
}

#[test]
fn criterion_3_hoqr_peaks() {
    let mut spec = ScanSpec::hbar_scan(grid_values(), 6.0, 0.3, 200);
    spec.m_max = Some(1280);
    let result = scan(&spec).expect("scan runs");
    let catalog = detect_peaks(&result, 5, 2.0).expect("peak detection");
    let targets = [0.6, 0.7, 1.125, 1.55, 3.3];
    // tolerance padded by an ulp-scale epsilon: the sample at 312 * 0.005
    // sits at 1.5600000000000001
    let found: Vec<bool> = targets
        .iter()
        .map(|&t| catalog.peaks.iter().any(|p| near(p.param_value, t, 0.01 + 1e-9)))
        .collect();
    let reversal = catalog.peaks.iter().any(|p| p.mean_k > 0.0)
        && catalog.peaks.iter().any(|p| p.mean_k < 0.0);
    let ok = found.iter().all(|&f| f) && reversal;
    report(
        "3 (HOQR peaks)",
        ok,
        &format!("targets found: {found:?}; current reversal: {reversal}"),
    );
}

#[test]
fn criterion_4_ballistic_growth() {
    let window: Vec<u64> = (50..=200).collect();
    let xs: Vec<f64> = window.iter().map(|&l| l as f64).collect();

    let resonant = ModelParams::from_kick_amplitude(3.0, 0.3, 1.5 * PI).unwrap();
    let series = evolve(&resonant, Grid::new(1024), 0.0, 200, 1).unwrap();
    let ys: Vec<f64> = window
        .iter()
        .map(|&l| series.at(l).expect("recorded").mean_k)
        .collect();
    let resonant_fit = fit_line(&xs, &ys);

    let mut max_slope: f64 = 0.0;
    for p in [0.5, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0] {
        let params = ModelParams::from_kick_amplitude(p, 0.3, 1.001 * PI).unwrap();
        let series = evolve(&params, Grid::new(1024), 0.0, 200, 1).unwrap();
        let ys: Vec<f64> = window
            .iter()
            .map(|&l| series.at(l).expect("recorded").mean_k)
            .collect();
        max_slope = max_slope.max(fit_line(&xs, &ys).slope.abs());
    }

    let ok = resonant_fit.r_squared > 0.99 && max_slope < 0.01;
    report(
        "4 (ballistic growth)",
        ok,
        &format!(
            "resonant R^2 = {:.6}, slope = {:.4}; off-resonance max |slope| = {max_slope:.5}",
            resonant_fit.r_squared, resonant_fit.slope
        ),
    );
}

#[test]
fn criterion_5_chaos_threshold() {
    let estimator = ChaosEstimator::default();
    let f_high = chaos_fraction(0.8 * PI, 0.3, &estimator);
    let f_low = chaos_fraction(0.25 * PI, 0.3, &estimator);
    let k_thr = find_chaos_threshold(0.3, 0.5 * PI, 0.85 * PI, 0.99, &estimator)
        .expect("bracket valid");
    let in_window = (0.65 * PI..=0.85 * PI).contains(&k_thr);
    let ok = in_window && f_high >= 0.99 && f_low <= 0.95;
    report(
        "5 (classical chaos threshold)",
        ok,
        &format!(
            "K_thr = {:.4} pi (window [0.65, 0.85] pi), fraction(0.8 pi) = {f_high:.4}, fraction(0.25 pi) = {f_low:.4}",
            k_thr / PI
        ),
    );
}

#[test]
fn criterion_6_band_count_scaling() {
    let depths = log_spaced(5.0, 200.0, 12);
    let reports = band_count_sweep(&depths, 0.3, 128, 33).expect("sweep runs");
    let fit = fit_sqrt_scaling(&reports).expect("fit has enough points");
    let ok = (fit.exponent - 0.5).abs() <= 0.1 && fit.r_squared > 0.98;
    report(
        "6 (band-count scaling)",
        ok,
        &format!("exponent = {:.3}, R^2 = {:.5}", fit.exponent, fit.r_squared),
    );
}

fn random_state(rng: &mut ChaCha8Rng, grid: Grid, beta: f64) -> QuantumState {
    let mut amplitudes: Vec<Complex64> = (0..grid.len())
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let norm = amplitudes.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    for c in &mut amplitudes {
        *c /= norm;
    }
    QuantumState::from_amplitudes(grid, beta, amplitudes).expect("valid state")
}

#[test]
fn criterion_7_oracle_suites() {
    let mut detail = Vec::new();
    let mut ok = true;

    // split-operator step against the dense quadrature oracle
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let grid = Grid::new(8);
    let mut max_dev: f64 = 0.0;
    for _ in 0..20 {
        let params = ModelParams::from_kick_amplitude(
            rng.gen_range(0.0..6.0),
            rng.gen_range(0.0..1.0),
            rng.gen_range(0.1..4.0) * PI,
        )
        .unwrap();
        for _ in 0..100 {
            let beta = rng.gen_range(0.0..1.0);
            let state = random_state(&mut rng, grid, beta);
            let fast = step(&state, &params);
            let dense = dense_oracle_step(&state, &params).unwrap();
            for (a, b) in fast.amplitudes().iter().zip(dense.amplitudes()) {
                max_dev = max_dev.max((a - b).norm());
            }
        }
    }
    ok &= max_dev < 1e-10;
    detail.push(format!("dense oracle dev {max_dev:.2e}"));

    // norm drift over 1000 kicks; stepped directly since the check concerns
    // the norm, not the truncation of observables the evolve guard protects
    let params = ModelParams::from_kick_amplitude(3.0, 0.3, 1.5 * PI).unwrap();
    let mut state = init_uniform(Grid::new(2048), 0.0).unwrap();
    let propagator = ratchet_core::Propagator::new(&params, state.grid(), 0.0);
    for _ in 0..1000 {
        propagator.step(&mut state);
    }
    let drift = (state.norm_sq() - 1.0).abs();
    ok &= drift < 1e-10;
    detail.push(format!("norm drift {drift:.2e}"));

    // symmetric potential carries no current
    let params = ModelParams::from_kick_amplitude(2.0, 0.0, 1.0).unwrap();
    let series = evolve(&params, Grid::new(256), 0.0, 500, 500).unwrap();
    let current = series.last().mean_k.abs();
    ok &= current < 1e-10;
    detail.push(format!("alpha=0 |<k>| {current:.2e}"));

    // one kick leaves the current unchanged
    let params = ModelParams::from_kick_amplitude(4.0, 0.3, 1.5 * PI).unwrap();
    let state = init_uniform(Grid::new(64), 0.25).unwrap();
    let kicked = ratchet_core::apply_kick(&state, &params);
    let shift = (kicked.current() - state.current()).abs();
    ok &= shift < 1e-12;
    detail.push(format!("one-kick drift {shift:.2e}"));

    // tangent map against finite differences
    let (k, alpha, h) = (2.0, 0.3, 1e-7);
    let mut fd_dev: f64 = 0.0;
    for (x, p) in [(0.7, 0.2), (3.1, 1.4), (5.5, 4.0)] {
        let base = map_step(&ClassicalState::new(x, p), k, alpha);
        let shifted = map_step(&ClassicalState::new(x + h, p), k, alpha);
        let exact = tangent_step(&ClassicalState::with_tangent(x, p, 1.0, 0.0), k, alpha)
            .unwrap()
            .tangent
            .unwrap();
        fd_dev = fd_dev.max(((shifted.p - base.p) / h - exact.dp).abs());
    }
    ok &= fd_dev < 1e-6;
    detail.push(format!("tangent FD dev {fd_dev:.2e}"));

    // Jacobian determinant is 1 (symplectic map): push both basis tangent
    // vectors through the map and take the determinant of the result
    let mut det_dev: f64 = 0.0;
    for _ in 0..1000 {
        let x: f64 = rng.gen_range(0.0..2.0 * PI);
        let p: f64 = rng.gen_range(-10.0..10.0);
        let kk: f64 = rng.gen_range(0.0..10.0);
        let aa: f64 = rng.gen_range(0.0..1.0);
        let col_x = tangent_step(&ClassicalState::with_tangent(x, p, 1.0, 0.0), kk, aa)
            .unwrap()
            .tangent
            .unwrap();
        let col_p = tangent_step(&ClassicalState::with_tangent(x, p, 0.0, 1.0), kk, aa)
            .unwrap()
            .tangent
            .unwrap();
        let det = col_x.dx * col_p.dp - col_p.dx * col_x.dp;
        det_dev = det_dev.max((det - 1.0).abs());
    }
    ok &= det_dev < 1e-12;
    detail.push(format!("Jacobian det dev {det_dev:.2e}"));

    // plane-wave bands against the real-space finite-difference oracle
    let mut band_dev: f64 = 0.0;
    for (depth, alpha) in [(10.0, 0.3), (50.0, 0.3)] {
        for beta_half in [false, true] {
            let beta = if beta_half { 0.5 } else { 0.0 };
            let plane = bloch_eigenvalues(depth, alpha, beta, 64);
            let fd = support::fd_band_energies(depth, alpha, beta_half, 512, 5);
            for (pw, fd) in plane.iter().zip(&fd) {
                band_dev = band_dev.max((pw - fd).abs() / pw.abs().max(1.0));
            }
        }
    }
    ok &= band_dev < 1e-6;
    detail.push(format!("band oracle dev {band_dev:.2e}"));

    report("7 (oracle suites)", ok, &detail.join(", "));
}

fn run_ratchet(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_ratchet"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn read_bytes(dir: &Path, name: &str) -> Vec<u8> {
    std::fs::read(dir.join(name)).unwrap_or_else(|e| panic!("read {name}: {e}"))
}

#[test]
fn criterion_8_determinism() {
    let base = tempfile::tempdir().expect("tempdir");
    let mut ok = true;
    let mut detail = Vec::new();

    // a full preset across thread counts
    let dirs = [base.path().join("bands1"), base.path().join("bands3")];
    for (dir, threads) in dirs.iter().zip(["1", "3"]) {
        let output = run_ratchet(&[
            "bands",
            "--preset",
            "bands",
            "--threads",
            threads,
            "--out",
            dir.to_str().unwrap(),
        ]);
        assert!(output.status.success(), "bands preset failed: {output:?}");
    }
    for name in ["band_counts.csv", "fit.json"] {
        let same = read_bytes(&dirs[0], name) == read_bytes(&dirs[1], name);
        ok &= same;
        detail.push(format!("{name} identical: {same}"));
    }

    // a scan config across thread counts
    let config = base.path().join("scan.toml");
    std::fs::write(
        &config,
        "[scan]\nstart = 0.5\nstop = 2.5\nstep = 0.05\nkick_amplitude = 0.5\nkicks = 50\nm_max = 128\n",
    )
    .expect("write config");
    let dirs = [base.path().join("scan1"), base.path().join("scan4")];
    for (dir, threads) in dirs.iter().zip(["1", "4"]) {
        let output = run_ratchet(&[
            "scan",
            "--config",
            config.to_str().unwrap(),
            "--threads",
            threads,
            "--out",
            dir.to_str().unwrap(),
        ]);
        assert!(output.status.success(), "scan failed: {output:?}");
    }
    for name in ["scan.csv", "peaks.csv"] {
        let same = read_bytes(&dirs[0], name) == read_bytes(&dirs[1], name);
        ok &= same;
        detail.push(format!("{name} identical: {same}"));
    }

    report("8 (determinism)", ok, &detail.join(", "));
}
