//! Shared test inputs.

use crate::{EffectiveDynamics, ProblemConfig, ProblemKind};

/// Calibrated acquisition setup (price cap 31.1).
pub(crate) fn table1() -> ProblemConfig {
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
        dynamics: EffectiveDynamics::new(0.0, 0.1041, 0.01598, 0.1323).unwrap(),
    }
}

/// Liquidation counterpart (price floor 30.8).
pub(crate) fn table1_liquidation() -> ProblemConfig {
    ProblemConfig {
        kind: ProblemKind::Liquidation,
        s_min: 30.8,
        s_max: 33.0,
        ..table1()
    }
}

pub(crate) fn with_sigma_total(config: ProblemConfig, sigma: f64) -> ProblemConfig {
    ProblemConfig {
        dynamics: EffectiveDynamics::pure_diffusion(sigma).unwrap(),
        ..config
    }
}
