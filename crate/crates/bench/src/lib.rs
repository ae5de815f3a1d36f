//! Shared inputs for the criterion benchmarks in `benches/`.

use jumpexec_core::{EffectiveDynamics, ProblemConfig, ProblemKind};

/// Calibrated acquisition problem used throughout the benchmarks.
pub fn table1_acquisition() -> ProblemConfig {
    ProblemConfig {
        kind: ProblemKind::Acquisition,
        s0: 30.97,
        horizon: 1.0,
        s_min: 29.0,
        s_max: 31.1,
        alpha: 0.01,
        kappa: 1e-4,
        phi: 1e-5,
        b_perm: 0.0,
        spread: 0.01,
        target_inventory: 1.0,
        dynamics: EffectiveDynamics::new(0.0, 0.1041, 0.01598, 0.1323).expect("valid coefficients"),
    }
}
