//! Tick-level jump-diffusion price models.
//!
//! These are the raw models whose scaling limits the [`coefficients`]
//! module approximates. They exist to check those approximations
//! empirically; the optimal-execution pipeline itself only consumes the
//! resulting [`EffectiveDynamics`].
//!
//! [`coefficients`]: crate::coefficients
//! [`EffectiveDynamics`]: crate::EffectiveDynamics

mod hawkes;
mod path;
mod renewal;
mod tick_chain;

pub use hawkes::{sample_hawkes_events, HawkesParams};
pub use path::{
    empirical_scaling_stats, simulate_jump_diffusion_path, JumpDiffusionPath, JumpDiffusionSpec,
    JumpModel, ScalingStats,
};
pub use renewal::{sample_renewal_events, Interarrival, SemiMarkovParams};
pub use tick_chain::{mark_events, step_tick_chain, TickChainParams};

/// Event epochs of a counting process, optionally carrying tick signs.
///
/// Samplers return times only (`marks` empty); [`mark_events`] attaches a
/// tick-chain realisation of the same length.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EventStream {
    pub times: Vec<f64>,
    pub marks: Vec<i8>,
}

impl EventStream {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Number of events with epoch `<= t`.
    pub fn count_until(&self, t: f64) -> usize {
        self.times.partition_point(|&s| s <= t)
    }
}
