//! Optimal acquisition and liquidation under jump-diffusion midprice dynamics.
//!
//! The crate is organised bottom-up:
//!
//! * [`microstructure`] simulates the raw tick-level price models (a two-state
//!   tick chain driven by renewal or Hawkes event clocks) and measures their
//!   scaling-limit statistics.
//! * [`coefficients`] folds those jump parts into effective drift and
//!   volatility coefficients, producing [`EffectiveDynamics`].
//! * [`hjb`] solves the reduced HJB equation for the trading-speed surface
//!   `h(t, S)` with a tridiagonal implicit-explicit finite difference scheme.
//! * [`strategy`] runs the resulting feedback strategy (and the Almgren-Chriss
//!   benchmark) over Monte Carlo price paths with full cash accounting.

// Validation uses `!(x > 0.0)` on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod coefficients;
mod error;
#[cfg(test)]
mod fixtures;
pub mod hjb;
pub mod microstructure;
pub mod rng;
pub mod strategy;

pub use coefficients::{CoefficientReport, DynamicsSource, EffectiveDynamics};
pub use error::{Error, Result};
pub use hjb::{Grid, HSurface, Lookup, ProblemConfig, ProblemKind, QuadraticTerm};
pub use microstructure::{
    EventStream, HawkesParams, Interarrival, SemiMarkovParams, TickChainParams,
};
pub use strategy::{SimulationRecord, StopReason, SummaryStats};
