use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::{mark_events, sample_hawkes_events, sample_renewal_events, EventStream};
use super::{HawkesParams, SemiMarkovParams, TickChainParams};
use crate::rng::{stream, Lane};
use crate::{Error, Result};

/// Event clock driving the tick jumps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum JumpModel {
    SemiMarkov(SemiMarkovParams),
    Hawkes(HawkesParams),
}

impl JumpModel {
    fn sample_events<R: Rng + ?Sized>(&self, horizon: f64, rng: &mut R) -> EventStream {
        match self {
            JumpModel::SemiMarkov(p) => sample_renewal_events(p, horizon, rng),
            JumpModel::Hawkes(p) => sample_hawkes_events(p, horizon, rng),
        }
    }

    /// Long-run number of events per unit time.
    pub fn event_rate(&self) -> f64 {
        match self {
            JumpModel::SemiMarkov(p) => 1.0 / p.m_tau,
            JumpModel::Hawkes(p) => p.stationary_rate(),
        }
    }
}

/// Raw jump-diffusion `S_t = S_0 + sigma W_t + sum_k X_k` with no impact drift.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpDiffusionSpec {
    pub model: JumpModel,
    pub chain: TickChainParams,
    pub sigma: f64,
    pub s0: f64,
}

/// Price path on a regular grid, kept split into its two independent parts.
#[derive(Debug, Clone, PartialEq)]
pub struct JumpDiffusionPath {
    pub times: Vec<f64>,
    /// Cumulative Brownian part `sigma W_t`.
    pub diffusion: Vec<f64>,
    /// Cumulative tick jumps.
    pub jumps: Vec<f64>,
    pub prices: Vec<f64>,
    pub events: EventStream,
}

/// Samples one path on the grid `k * dt`, `k = 0..=ceil(horizon / dt)`.
///
/// A jump at epoch `tau` lands on the first grid point `>= tau`. Events,
/// marks and Brownian increments each draw from their own stream, so
/// switching one source off leaves the others bit-identical.
pub fn simulate_jump_diffusion_path(
    spec: &JumpDiffusionSpec,
    dt: f64,
    horizon: f64,
    base_seed: u64,
    path_id: u64,
) -> Result<JumpDiffusionPath> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::invalid("dt", format!("must be > 0, got {dt}")));
    }
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(Error::invalid(
            "horizon",
            format!("must be > 0, got {horizon}"),
        ));
    }
    let steps = ((horizon / dt) - 1e-9).ceil().max(1.0) as usize;
    let horizon = steps as f64 * dt;

    let mut events = spec
        .model
        .sample_events(horizon, &mut stream(base_seed, path_id, Lane::Events));
    mark_events(
        &mut events,
        &spec.chain,
        &mut stream(base_seed, path_id, Lane::Marks),
    );

    let mut bucket = vec![0.0; steps + 1];
    for (&t, &mark) in events.times.iter().zip(&events.marks) {
        let k = ((t / dt) - 1e-12).ceil().clamp(0.0, steps as f64) as usize;
        bucket[k] += f64::from(mark) * spec.chain.delta;
    }

    let mut diffusion_rng = stream(base_seed, path_id, Lane::Diffusion);
    let scale = spec.sigma * dt.sqrt();
    let mut times = Vec::with_capacity(steps + 1);
    let mut diffusion = Vec::with_capacity(steps + 1);
    let mut jumps = Vec::with_capacity(steps + 1);
    let mut prices = Vec::with_capacity(steps + 1);
    let (mut w, mut j) = (0.0, 0.0);
    for (k, jump) in bucket.into_iter().enumerate() {
        if k > 0 {
            let z: f64 = diffusion_rng.sample(StandardNormal);
            w += scale * z;
        }
        j += jump;
        times.push(k as f64 * dt);
        diffusion.push(w);
        jumps.push(j);
        prices.push(spec.s0 + w + j);
    }
    Ok(JumpDiffusionPath {
        times,
        diffusion,
        jumps,
        prices,
        events,
    })
}

/// Empirical scaling-limit statistics of `S_{tn}` over many paths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingStats {
    /// Mean of `(S_{tn} - S_0) / (t n)`; the LLN drift.
    pub drift: f64,
    pub drift_se: f64,
    /// Sample variance of `(S_{tn} - S_0) / sqrt(n)`; the FCLT variance at `t`.
    pub scaled_variance: f64,
    /// Standard error of `scaled_variance`.
    pub variance_se: f64,
    pub n_paths: usize,
}

/// Simulates `S_{tn}` directly (no grid) on `n_paths` paths and measures
/// its drift and diffusive variance under the `n`-rescaling.
pub fn empirical_scaling_stats(
    spec: &JumpDiffusionSpec,
    t: f64,
    n: f64,
    n_paths: usize,
    base_seed: u64,
) -> Result<ScalingStats> {
    if !(t > 0.0) {
        return Err(Error::invalid("t", "must be > 0"));
    }
    if n < 100.0 {
        return Err(Error::invalid(
            "n",
            format!("scale factor must be >= 100, got {n}"),
        ));
    }
    if n_paths < 2 {
        return Err(Error::invalid("n_paths", "need at least 2 paths"));
    }
    let horizon = t * n;
    let increments: Vec<f64> = (0..n_paths as u64)
        .into_par_iter()
        .map(|path_id| {
            let mut events = spec
                .model
                .sample_events(horizon, &mut stream(base_seed, path_id, Lane::Events));
            mark_events(
                &mut events,
                &spec.chain,
                &mut stream(base_seed, path_id, Lane::Marks),
            );
            let ticks: i64 = events.marks.iter().map(|&m| i64::from(m)).sum();
            let z: f64 = stream(base_seed, path_id, Lane::Diffusion).sample(StandardNormal);
            ticks as f64 * spec.chain.delta + spec.sigma * horizon.sqrt() * z
        })
        .collect();

    let m = n_paths as f64;
    let drifts = increments.iter().map(|x| x / horizon);
    let drift = drifts.clone().sum::<f64>() / m;
    let drift_var = drifts.map(|d| (d - drift).powi(2)).sum::<f64>() / (m - 1.0);

    let scaled: Vec<f64> = increments.iter().map(|x| x / n.sqrt()).collect();
    let mean = scaled.iter().sum::<f64>() / m;
    let centred: Vec<f64> = scaled.iter().map(|x| (x - mean).powi(2)).collect();
    let variance = centred.iter().sum::<f64>() / (m - 1.0);
    let fourth = centred.iter().map(|c| c * c).sum::<f64>() / m;
    let variance_se = ((fourth - variance * variance).max(0.0) / m).sqrt();

    Ok(ScalingStats {
        drift,
        drift_se: (drift_var / m).sqrt(),
        scaled_variance: variance,
        variance_se,
        n_paths,
    })
}
