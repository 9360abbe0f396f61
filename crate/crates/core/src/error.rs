use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum RatchetError {
    #[error("invalid parameter {name} = {value}")]
    InvalidParameter { name: &'static str, value: f64 },

    /// Momentum population reached the edge of the truncated ladder. The
    /// evolution up to `kick - 1` kicks is trustworthy; the state at `kick`
    /// is not.
    #[error(
        "aliasing guard tripped at kick {kick}: edge population {edge:.3e} > {threshold:.1e} \
         (increase m_max)"
    )]
    AliasingGuard { kick: u64, edge: f64, threshold: f64 },

    #[error("grid with {n} momentum states is too large for the dense oracle (limit {limit})")]
    GridTooLarge { n: usize, limit: usize },

    #[error("mismatched input lengths: {left} vs {right}")]
    MismatchedLengths { left: usize, right: usize },

    #[error("weights must be nonnegative and sum to 1 (sum = {sum})")]
    InvalidWeights { sum: f64 },

    #[error("classical state carries no tangent vector")]
    MissingTangent,

    #[error(
        "bisection bracket invalid: need fraction(k_lo) < target <= fraction(k_hi), \
         got {f_lo} and {f_hi} for target {target}"
    )]
    InvalidBracket { f_lo: f64, f_hi: f64, target: f64 },

    #[error("need at least {required} data points, got {got}")]
    TooFewPoints { required: usize, got: usize },

    #[error("invalid scan specification: {0}")]
    InvalidScanSpec(String),
}
