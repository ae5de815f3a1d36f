use serde::{Deserialize, Serialize};

use super::ProblemConfig;
use crate::{Error, Result};

/// Uniform `(N + 1) x (M + 1)` mesh on `[0, T] x [S_min, S_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub n_time: usize,
    pub n_price: usize,
    pub horizon: f64,
    pub s_min: f64,
    pub s_max: f64,
    pub dt: f64,
    pub ds: f64,
}

impl Grid {
    /// Builds the mesh for `config`, rejecting steps where the explicit part
    /// of the update would not contract (`dt * alpha / kappa >= 1`).
    pub fn new(config: &ProblemConfig, n_time: usize, n_price: usize) -> Result<Self> {
        config.validate()?;
        if n_time < 2 {
            return Err(Error::invalid(
                "n_time",
                format!("need at least 2 time steps, got {n_time}"),
            ));
        }
        if n_price < 3 {
            return Err(Error::invalid(
                "n_price",
                format!("need at least 3 price steps, got {n_price}"),
            ));
        }
        let dt = config.horizon / n_time as f64;
        let ratio = dt * config.alpha / config.kappa;
        if ratio >= 1.0 {
            let suggested_n = (config.horizon * config.alpha / config.kappa).floor() as usize + 1;
            return Err(Error::Unstable { ratio, suggested_n });
        }
        Ok(Self {
            n_time,
            n_price,
            horizon: config.horizon,
            s_min: config.s_min,
            s_max: config.s_max,
            dt,
            ds: (config.s_max - config.s_min) / n_price as f64,
        })
    }

    pub fn time(&self, n: usize) -> f64 {
        n as f64 * self.dt
    }

    pub fn price(&self, i: usize) -> f64 {
        self.s_min + i as f64 * self.ds
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.n_time).map(|n| self.time(n))
    }

    pub fn prices(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.n_price).map(|i| self.price(i))
    }

    /// Nearest time row for `t`, clamped to the grid.
    pub fn time_index(&self, t: f64) -> usize {
        ((t / self.dt).round().max(0.0) as usize).min(self.n_time)
    }
}
