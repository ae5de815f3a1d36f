use rand::Rng;
use rand_distr::Exp1;
use serde::{Deserialize, Serialize};

use super::EventStream;
use crate::{Error, Result};

/// Univariate Hawkes process with exponential kernel
/// `mu(t) = kernel_scale * exp(-kernel_decay * t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HawkesParams {
    /// Background intensity.
    pub lambda_base: f64,
    pub kernel_scale: f64,
    pub kernel_decay: f64,
}

impl HawkesParams {
    pub fn new(lambda_base: f64, kernel_scale: f64, kernel_decay: f64) -> Result<Self> {
        let params = Self {
            lambda_base,
            kernel_scale,
            kernel_decay,
        };
        params.validate()?;
        Ok(params)
    }

    /// Exponential kernel with the given background rate and branching ratio
    /// and unit decay rate.
    pub fn with_branching_ratio(lambda_base: f64, mu_hat: f64) -> Result<Self> {
        Self::new(lambda_base, mu_hat, 1.0)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda_base.is_finite() && self.lambda_base > 0.0) {
            return Err(Error::invalid(
                "lambda_base",
                format!("must be > 0, got {}", self.lambda_base),
            ));
        }
        if !(self.kernel_decay.is_finite() && self.kernel_decay > 0.0) {
            return Err(Error::invalid(
                "kernel_decay",
                format!("must be > 0, got {}", self.kernel_decay),
            ));
        }
        if !(self.kernel_scale.is_finite() && self.kernel_scale >= 0.0) {
            return Err(Error::invalid(
                "kernel_scale",
                format!("must be >= 0, got {}", self.kernel_scale),
            ));
        }
        let mu_hat = self.branching_ratio();
        if mu_hat >= 1.0 {
            return Err(Error::NonStationary { mu_hat });
        }
        Ok(())
    }

    /// Integral of the kernel over `[0, inf)`.
    pub fn branching_ratio(&self) -> f64 {
        self.kernel_scale / self.kernel_decay
    }

    /// Long-run event rate `lambda / (1 - mu_hat)`.
    pub fn stationary_rate(&self) -> f64 {
        self.lambda_base / (1.0 - self.branching_ratio())
    }
}

/// Event epochs on `(0, horizon]` by Ogata thinning.
///
/// Between events the intensity only decays, so the intensity just after the
/// current candidate bounds it until the next one. The bound is refreshed
/// after every candidate and the excitation is carried as a single decaying
/// sum.
pub fn sample_hawkes_events<R: Rng + ?Sized>(
    params: &HawkesParams,
    horizon: f64,
    rng: &mut R,
) -> EventStream {
    let mut times = Vec::with_capacity((params.stationary_rate() * horizon * 1.1) as usize + 4);
    let mut t = 0.0;
    let mut excitation = 0.0;
    loop {
        let bound = params.lambda_base + excitation;
        let wait: f64 = rng.sample::<f64, _>(Exp1) / bound;
        t += wait;
        if t > horizon {
            break;
        }
        excitation *= (-params.kernel_decay * wait).exp();
        let intensity = params.lambda_base + excitation;
        if rng.random::<f64>() * bound <= intensity {
            times.push(t);
            excitation += params.kernel_scale;
        }
    }
    EventStream {
        times,
        marks: Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{stream, Lane};

    #[test]
    fn rejects_non_stationary_kernel() {
        assert!(matches!(
            HawkesParams::new(1.0, 1.2, 1.0),
            Err(Error::NonStationary { .. })
        ));
        assert!(HawkesParams::new(1.0, 1.0, 1.0).is_err());
        assert!(HawkesParams::new(0.0, 0.5, 1.0).is_err());
    }

    #[test]
    fn poisson_when_unexcited() {
        let params = HawkesParams::new(2.0, 0.0, 1.0).unwrap();
        let horizon = 50.0;
        let n_paths = 2000;
        let total: usize = (0..n_paths)
            .map(|i| sample_hawkes_events(&params, horizon, &mut stream(5, i, Lane::Events)).len())
            .sum();
        let mean = total as f64 / n_paths as f64;
        let expected = params.lambda_base * horizon;
        let se = (expected / n_paths as f64).sqrt();
        assert!((mean - expected).abs() < 3.0 * se, "mean = {mean}");
    }

    #[test]
    fn mean_count_follows_branching_expectation() {
        let params = HawkesParams::with_branching_ratio(1.0, 0.5).unwrap();
        let horizon = 1000.0;
        let counts: Vec<f64> = (0..1000)
            .map(|i| {
                sample_hawkes_events(&params, horizon, &mut stream(6, i, Lane::Events)).len() as f64
            })
            .collect();
        let n = counts.len() as f64;
        let mean = counts.iter().sum::<f64>() / n;
        let var = counts.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (n - 1.0);
        let se = (var / n).sqrt();
        // T * lambda / (1 - mu_hat) = 2000 less the start-up deficit
        // lambda * mu_hat / (beta * (1 - mu_hat)^2) = 2 from an empty history.
        let expected = 1998.0;
        assert!(
            (mean - expected).abs() < 3.0 * se,
            "mean = {mean}, se = {se}"
        );
    }

    #[test]
    fn counts_monotone_in_horizon() {
        let params = HawkesParams::with_branching_ratio(1.5, 0.7).unwrap();
        let mut last = 0;
        for horizon in [1.0, 5.0, 10.0, 40.0, 100.0] {
            let count =
                sample_hawkes_events(&params, horizon, &mut stream(9, 0, Lane::Events)).len();
            assert!(count >= last);
            last = count;
        }
    }

    #[test]
    fn times_strictly_increasing() {
        let params = HawkesParams::with_branching_ratio(3.0, 0.9).unwrap();
        let events = sample_hawkes_events(&params, 200.0, &mut stream(10, 0, Lane::Events));
        assert!(events.times.windows(2).all(|w| w[0] < w[1]));
        assert!(events.times.iter().all(|&t| t > 0.0 && t <= 200.0));
    }
}
