//! Reduced HJB equation for the trading-speed surface `h(t, S)`.
//!
//! With the ansatz `H = qS + q^2 h(t, S)` and no permanent impact, both
//! problems reduce to
//!
//! ```text
//! h_t + (sigma_total^2 / 2) h_SS - h^2 / kappa ± phi = 0,   h(T, S) = alpha,
//! ```
//!
//! with `+phi` for acquisition and `-phi` for liquidation. The price cap
//! `S_max` (acquisition) or floor `S_min` (liquidation) carries the Dirichlet
//! condition `h = alpha`; the opposite edge has `h_SS = 0`.

mod grid;
mod solver;
mod surface;
mod tridiag;

pub use grid::Grid;
pub use solver::{backward_step, solve_surface, solve_surface_with, QuadraticTerm};
pub use surface::{lookup_h, HSurface, Lookup};
pub use tridiag::solve_tridiagonal;

use serde::{Deserialize, Serialize};

use crate::{EffectiveDynamics, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProblemKind {
    Acquisition,
    Liquidation,
}

impl ProblemKind {
    /// `+1` for acquisition, `-1` for liquidation.
    pub fn sign(self) -> f64 {
        match self {
            ProblemKind::Acquisition => 1.0,
            ProblemKind::Liquidation => -1.0,
        }
    }
}

/// Economic inputs of one execution problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProblemConfig {
    pub kind: ProblemKind,
    pub s0: f64,
    /// Trading horizon `T`.
    pub horizon: f64,
    pub s_min: f64,
    pub s_max: f64,
    /// Terminal penalty per unit.
    pub alpha: f64,
    /// Temporary impact slope.
    pub kappa: f64,
    /// Running inventory penalty.
    pub phi: f64,
    /// Permanent impact slope; the reduced equation requires 0.
    pub b_perm: f64,
    /// Bid-ask spread.
    pub spread: f64,
    pub target_inventory: f64,
    pub dynamics: EffectiveDynamics,
}

impl ProblemConfig {
    pub fn validate(&self) -> Result<()> {
        let finite = [
            ("s0", self.s0),
            ("horizon", self.horizon),
            ("s_min", self.s_min),
            ("s_max", self.s_max),
            ("alpha", self.alpha),
            ("kappa", self.kappa),
            ("phi", self.phi),
            ("b_perm", self.b_perm),
            ("spread", self.spread),
            ("target_inventory", self.target_inventory),
        ];
        for (name, v) in finite {
            if !v.is_finite() {
                return Err(Error::invalid(name, format!("must be finite, got {v}")));
            }
        }
        if !(self.horizon > 0.0) {
            return Err(Error::invalid("horizon", "must be > 0"));
        }
        if !(self.s_min < self.s_max) {
            return Err(Error::invalid("s_min", "must be below s_max"));
        }
        if !(self.s_min <= self.s0 && self.s0 <= self.s_max) {
            return Err(Error::invalid("s0", "must lie in [s_min, s_max]"));
        }
        if !(self.alpha > 0.0) {
            return Err(Error::invalid("alpha", "must be > 0"));
        }
        if !(self.kappa > 0.0) {
            return Err(Error::invalid("kappa", "must be > 0"));
        }
        if !(self.phi >= 0.0) {
            return Err(Error::invalid("phi", "must be >= 0"));
        }
        if self.b_perm != 0.0 {
            return Err(Error::invalid(
                "b_perm",
                "the reduced equation assumes no permanent impact (b = 0)",
            ));
        }
        if !(self.spread >= 0.0) {
            return Err(Error::invalid("spread", "must be >= 0"));
        }
        if !(self.target_inventory > 0.0) {
            return Err(Error::invalid("target_inventory", "must be > 0"));
        }
        // Re-checks the volatility components.
        EffectiveDynamics::new(
            self.dynamics.eta,
            self.dynamics.sigma,
            self.dynamics.sigma_bar,
            self.dynamics.varsigma,
        )?;
        Ok(())
    }

    /// Price level at which trading stops and the remainder is block-traded.
    pub fn barrier(&self) -> f64 {
        match self.kind {
            ProblemKind::Acquisition => self.s_max,
            ProblemKind::Liquidation => self.s_min,
        }
    }

    /// Whether `price` has touched or crossed the barrier.
    pub fn barrier_hit(&self, price: f64) -> bool {
        match self.kind {
            ProblemKind::Acquisition => price >= self.s_max,
            ProblemKind::Liquidation => price <= self.s_min,
        }
    }
}
