use rand::Rng;
use rand_distr::StandardNormal;

use crate::hjb::{ProblemConfig, ProblemKind};
use crate::{EffectiveDynamics, Error, Result};

/// Euler step of `dS = sigma_total dW` (no permanent impact, so no drift).
pub fn simulate_price_step<R: Rng + ?Sized>(
    price: f64,
    dt: f64,
    dynamics: &EffectiveDynamics,
    rng: &mut R,
) -> f64 {
    let z: f64 = rng.sample(StandardNormal);
    price + dynamics.sigma_total * dt.sqrt() * z
}

/// Feedback speed `remaining * h / kappa`.
pub fn optimal_speed(h: f64, remaining: f64, kappa: f64) -> f64 {
    remaining * h / kappa
}

/// Price paid (acquisition) or received (liquidation) per unit when trading
/// at speed `nu`: half spread plus linear temporary impact.
pub fn execution_price(price: f64, nu: f64, config: &ProblemConfig) -> f64 {
    let cost = 0.5 * config.spread + config.kappa * nu;
    match config.kind {
        ProblemKind::Acquisition => price + cost,
        ProblemKind::Liquidation => price - cost,
    }
}

/// Almgren-Chriss benchmark rate per unit of outstanding inventory, in the
/// same units as `h` (so `nu_AC(T) = alpha`); the benchmark trades at
/// `remaining * ac_speed / kappa`.
///
/// The liquidation closed form is negative as written; its magnitude is
/// returned. With `phi = 0` the `phi -> 0` limit `1 / (1/alpha + (T-t)/kappa)`
/// is used.
pub fn ac_speed(t: f64, config: &ProblemConfig) -> Result<f64> {
    let tau = config.horizon - t;
    if config.phi == 0.0 {
        return Ok(1.0 / (1.0 / config.alpha + tau / config.kappa));
    }
    let root = (config.kappa * config.phi).sqrt();
    if config.alpha == root {
        return Err(Error::invalid(
            "alpha",
            "alpha = sqrt(kappa * phi) makes the benchmark singular",
        ));
    }
    let xi = (config.alpha + root) / (config.alpha - root);
    let gamma = (config.phi / config.kappa).sqrt();
    let growth = xi * (2.0 * gamma * tau).exp();
    let rate = match config.kind {
        ProblemKind::Acquisition => root * (growth + 1.0) / (growth - 1.0),
        ProblemKind::Liquidation => root * (1.0 + growth) / (1.0 - growth),
    };
    Ok(rate.abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{table1, table1_liquidation};
    use crate::rng::{stream, Lane};

    #[test]
    fn price_step_without_volatility_is_flat() {
        let dynamics = EffectiveDynamics::pure_diffusion(0.0).unwrap();
        let mut rng = stream(1, 0, Lane::Diffusion);
        assert_eq!(simulate_price_step(30.97, 0.01, &dynamics, &mut rng), 30.97);
    }

    #[test]
    fn price_paths_are_martingales_with_brownian_variance() {
        let dynamics = table1().dynamics;
        let (n_paths, steps) = (10_000u64, 100);
        let dt = 1.0 / steps as f64;
        let finals: Vec<f64> = (0..n_paths)
            .map(|i| {
                let mut rng = stream(2, i, Lane::Diffusion);
                (0..steps).fold(30.97, |s, _| {
                    simulate_price_step(s, dt, &dynamics, &mut rng)
                })
            })
            .collect();
        let n = n_paths as f64;
        let mean = finals.iter().sum::<f64>() / n;
        let var = finals.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (n - 1.0);
        let st = dynamics.sigma_total;
        assert!((mean - 30.97).abs() < 3.0 * st / n.sqrt(), "mean = {mean}");
        assert!((var - st * st).abs() / (st * st) < 0.05, "var = {var}");
    }

    #[test]
    fn optimal_speed_examples() {
        assert_eq!(optimal_speed(0.01, 0.0, 1e-4), 0.0);
        assert!((optimal_speed(0.01, 1.0, 1e-4) - 100.0).abs() < 1e-12);
        assert_eq!(
            optimal_speed(0.004, 2.0, 1e-4),
            2.0 * optimal_speed(0.004, 1.0, 1e-4)
        );
    }

    #[test]
    fn execution_price_examples() {
        let mut config = table1();
        config.spread = 0.0;
        assert_eq!(execution_price(30.0, 0.0, &config), 30.0);
        config.spread = 0.01;
        assert!((execution_price(30.97, 100.0, &config) - 30.985).abs() < 1e-12);
        let liq = ProblemConfig {
            kind: ProblemKind::Liquidation,
            ..config
        };
        for nu in [0.0, 3.0, 100.0] {
            let acq = execution_price(31.0, nu, &config);
            assert!((execution_price(31.0, nu, &liq) - (2.0 * 31.0 - acq)).abs() < 1e-12);
        }
    }

    #[test]
    fn ac_terminal_value_is_alpha() {
        for config in [table1(), table1_liquidation()] {
            let v = ac_speed(config.horizon, &config).unwrap();
            assert!((v - config.alpha).abs() < 1e-12, "{v}");
        }
    }

    #[test]
    fn ac_constants_for_calibrated_inputs() {
        let config = table1();
        let gamma = (config.phi / config.kappa).sqrt();
        let root = (config.kappa * config.phi).sqrt();
        assert!((gamma - 0.316227766).abs() < 1e-8);
        assert!((root - 3.16227766e-5).abs() < 1e-13);
    }

    #[test]
    fn ac_is_monotone_towards_maturity() {
        let config = table1();
        let mut last = 0.0;
        for k in 0..=1000 {
            let v = ac_speed(k as f64 / 1000.0, &config).unwrap();
            assert!(v >= last);
            last = v;
        }
    }

    #[test]
    fn ac_rejects_singular_xi() {
        let config = ProblemConfig {
            alpha: (1e-4f64 * 1e-5).sqrt(),
            ..table1()
        };
        assert!(ac_speed(0.5, &config).is_err());
    }

    #[test]
    fn ac_zero_phi_limit() {
        let config = ProblemConfig {
            phi: 0.0,
            ..table1()
        };
        let v = ac_speed(0.0, &config).unwrap();
        assert!((v - 1.0 / (100.0 + 1e4)).abs() < 1e-15);
        let near = ProblemConfig {
            phi: 1e-14,
            ..table1()
        };
        assert!((ac_speed(0.0, &near).unwrap() - v).abs() / v < 1e-6);
    }
}
