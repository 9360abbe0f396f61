//! Named parameter presets, one per figure panel of the reference
//! experiment set. Each preset is a complete `RunConfig` for its subcommand.

use crate::config::{
    Axis, BandsConfig, ClassicalConfig, ConfigError, EvolveConfig, GammaConfig, RunConfig,
    ScanConfig,
};

pub const PRESET_NAMES: [&str; 10] = [
    "fig1a", "fig1b", "fig1c", "fig1d", "fig2a", "fig2b", "fig2c", "fig2d", "fig3", "fig4",
];

pub fn preset(name: &str) -> Result<RunConfig, ConfigError> {
    let mut config = RunConfig::default();
    match name {
        "fig1a" => config.evolve = Some(evolve_preset(1.001, low_p_list(), 1024)),
        "fig1b" => config.evolve = Some(evolve_preset(0.7, low_p_list(), 1024)),
        "fig1c" => config.evolve = Some(evolve_preset(2.625, high_p_list(), 2048)),
        "fig1d" => config.evolve = Some(evolve_preset(1.5, low_p_list(), 2048)),
        "fig2a" => config.scan = Some(scan_preset(0.5, None, 9, 10.0)),
        "fig2b" => config.scan = Some(scan_preset(1.0, None, 9, 5.0)),
        "fig2c" => config.scan = Some(scan_preset(3.0, None, 9, 5.0)),
        "fig2d" => config.scan = Some(scan_preset(6.0, Some(1280), 5, 2.0)),
        "fig3" => config.classical = Some(ClassicalConfig::default()),
        "fig4" => config.gamma = Some(GammaConfig::default()),
        "bands" => config.bands = Some(BandsConfig::default()),
        other => {
            return Err(ConfigError(format!(
                "unknown preset '{other}'; available: {} and bands",
                PRESET_NAMES.join(", ")
            )))
        }
    }
    Ok(config)
}

fn low_p_list() -> Vec<f64> {
    vec![0.5, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0]
}

fn high_p_list() -> Vec<f64> {
    vec![1.0, 2.0, 3.0, 4.0, 5.0, 7.0, 8.0]
}

fn evolve_preset(hbar_over_pi: f64, kick_amplitudes: Vec<f64>, m_max: usize) -> EvolveConfig {
    EvolveConfig {
        hbar_over_pi,
        kick_amplitudes,
        alpha: 0.3,
        kicks: 200,
        record_every: 1,
        beta: 0.0,
        m_max: Some(m_max),
    }
}

fn scan_preset(
    kick_amplitude: f64,
    m_max: Option<usize>,
    peak_window: usize,
    peak_ratio: f64,
) -> ScanConfig {
    ScanConfig {
        axis: Axis::HbarOverPi,
        start: 0.1,
        stop: 4.0,
        step: 0.005,
        kick_amplitude,
        hbar_over_pi: 1.5,
        alpha: 0.3,
        kicks: 200,
        m_max,
        peak_window,
        peak_ratio,
        beta_sigma: None,
        beta_samples: 21,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The preset table must encode the published parameter lists exactly.
    #[test]
    fn preset_table() {
        let fig1a = preset("fig1a").unwrap().evolve.unwrap();
        assert_eq!(fig1a.hbar_over_pi, 1.001);
        assert_eq!(fig1a.kick_amplitudes, vec![0.5, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        assert_eq!(fig1a.kicks, 200);
        assert_eq!(fig1a.alpha, 0.3);

        let fig1b = preset("fig1b").unwrap().evolve.unwrap();
        assert_eq!(fig1b.hbar_over_pi, 0.7);
        assert_eq!(fig1b.kick_amplitudes, fig1a.kick_amplitudes);

        let fig1c = preset("fig1c").unwrap().evolve.unwrap();
        assert_eq!(fig1c.hbar_over_pi, 2.625);
        assert_eq!(fig1c.kick_amplitudes, vec![1.0, 2.0, 3.0, 4.0, 5.0, 7.0, 8.0]);

        let fig1d = preset("fig1d").unwrap().evolve.unwrap();
        assert_eq!(fig1d.hbar_over_pi, 1.5);
        assert_eq!(fig1d.kick_amplitudes, fig1a.kick_amplitudes);

        for (name, p) in [("fig2a", 0.5), ("fig2b", 1.0), ("fig2c", 3.0), ("fig2d", 6.0)] {
            let scan = preset(name).unwrap().scan.unwrap();
            assert_eq!(scan.kick_amplitude, p, "{name}");
            assert_eq!((scan.start, scan.stop, scan.step), (0.1, 4.0, 0.005));
            assert_eq!(scan.kicks, 200);
            assert_eq!(scan.alpha, 0.3);
        }

        let fig3 = preset("fig3").unwrap().classical.unwrap();
        assert_eq!(fig3.kick_strengths_over_pi, vec![0.25, 0.55, 0.70, 0.8]);
        assert_eq!(fig3.alpha, 0.3);

        let fig4 = preset("fig4").unwrap().gamma.unwrap();
        assert_eq!(fig4.hbar_over_pi, vec![0.7, 1.5, 2.625]);
        assert_eq!(fig4.kicks, 100);

        let bands = preset("bands").unwrap().bands.unwrap();
        assert_eq!((bands.depth_lo, bands.depth_hi, bands.depth_count), (5.0, 200.0, 12));
        assert_eq!(bands.alpha, 0.3);

        assert!(preset("fig9z").is_err());
    }
}
