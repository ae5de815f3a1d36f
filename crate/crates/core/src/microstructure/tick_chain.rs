use rand::Rng;
use serde::{Deserialize, Serialize};

use super::EventStream;
use crate::coefficients::pi_star;
use crate::{Error, Result};

/// Two-state tick chain with increments `±delta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TickChainParams {
    /// Tick size.
    pub delta: f64,
    /// P(up | previous up).
    pub p_cont: f64,
    /// P(down | previous down).
    pub p_cont_prime: f64,
}

impl TickChainParams {
    pub fn new(delta: f64, p_cont: f64, p_cont_prime: f64) -> Result<Self> {
        let params = Self {
            delta,
            p_cont,
            p_cont_prime,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta.is_finite() && self.delta > 0.0) {
            return Err(Error::invalid(
                "delta",
                format!("must be > 0, got {}", self.delta),
            ));
        }
        for (name, p) in [("p_cont", self.p_cont), ("p_cont_prime", self.p_cont_prime)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::invalid(name, format!("must lie in [0, 1], got {p}")));
            }
        }
        if self.p_cont + self.p_cont_prime == 2.0 {
            return Err(Error::invalid(
                "p_cont",
                "p_cont = p_cont_prime = 1 gives a reducible chain",
            ));
        }
        Ok(())
    }

    /// Long-run fraction of up-ticks.
    pub fn stationary_up(&self) -> f64 {
        pi_star(self.p_cont, self.p_cont_prime).expect("validated at construction")
    }
}

/// Next tick sign given the previous one.
pub fn step_tick_chain<R: Rng + ?Sized>(
    prev_sign: i8,
    params: &TickChainParams,
    rng: &mut R,
) -> i8 {
    debug_assert!(prev_sign == 1 || prev_sign == -1);
    let p_up = if prev_sign > 0 {
        params.p_cont
    } else {
        1.0 - params.p_cont_prime
    };
    if rng.random::<f64>() < p_up {
        1
    } else {
        -1
    }
}

/// Attach tick signs to every event, starting the chain from its stationary law.
pub fn mark_events<R: Rng + ?Sized>(
    events: &mut EventStream,
    params: &TickChainParams,
    rng: &mut R,
) {
    events.marks.clear();
    events.marks.reserve(events.times.len());
    if events.times.is_empty() {
        return;
    }
    let mut sign = if rng.random::<f64>() < params.stationary_up() {
        1
    } else {
        -1
    };
    events.marks.push(sign);
    for _ in 1..events.times.len() {
        sign = step_tick_chain(sign, params, rng);
        events.marks.push(sign);
    }
}
