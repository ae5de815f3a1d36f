use rand::Rng;
use rand_distr::{Distribution, Exp, Gamma, LogNormal};
use serde::{Deserialize, Serialize};

use super::EventStream;
use crate::{Error, Result};

/// Interarrival-time law of the renewal clock.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum Interarrival {
    Exponential {
        mean: f64,
    },
    Gamma {
        shape: f64,
        scale: f64,
    },
    /// `ln tau ~ N(mu, sigma^2)`.
    LogNormal {
        mu: f64,
        sigma: f64,
    },
}

impl Interarrival {
    pub fn mean(&self) -> f64 {
        match *self {
            Interarrival::Exponential { mean } => mean,
            Interarrival::Gamma { shape, scale } => shape * scale,
            Interarrival::LogNormal { mu, sigma } => (mu + 0.5 * sigma * sigma).exp(),
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            Interarrival::Exponential { mean } => mean.is_finite() && mean > 0.0,
            Interarrival::Gamma { shape, scale } => {
                shape.is_finite() && shape > 0.0 && scale.is_finite() && scale > 0.0
            }
            Interarrival::LogNormal { mu, sigma } => {
                mu.is_finite() && sigma.is_finite() && sigma >= 0.0
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::invalid(
                "interarrival",
                format!("bad parameters {self:?}"),
            ))
        }
    }

    fn sampler(&self) -> Sampler {
        match *self {
            Interarrival::Exponential { mean } => {
                Sampler::Exp(Exp::new(1.0 / mean).expect("validated"))
            }
            Interarrival::Gamma { shape, scale } => {
                Sampler::Gamma(Gamma::new(shape, scale).expect("validated"))
            }
            Interarrival::LogNormal { mu, sigma } => {
                Sampler::LogNormal(LogNormal::new(mu, sigma).expect("validated"))
            }
        }
    }
}

enum Sampler {
    Exp(Exp<f64>),
    Gamma(Gamma<f64>),
    LogNormal(LogNormal<f64>),
}

impl Sampler {
    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            Sampler::Exp(d) => d.sample(rng),
            Sampler::Gamma(d) => d.sample(rng),
            Sampler::LogNormal(d) => d.sample(rng),
        }
    }
}

/// Renewal clock of the semi-Markov model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SemiMarkovParams {
    pub interarrival: Interarrival,
    /// Mean interarrival time.
    pub m_tau: f64,
}

impl SemiMarkovParams {
    pub fn new(interarrival: Interarrival) -> Result<Self> {
        interarrival.validate()?;
        Ok(Self {
            interarrival,
            m_tau: interarrival.mean(),
        })
    }

    /// Checks that `m_tau` agrees with the law's mean to 1e-12 relative.
    pub fn with_mean(interarrival: Interarrival, m_tau: f64) -> Result<Self> {
        let params = Self {
            interarrival,
            m_tau,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        self.interarrival.validate()?;
        let mean = self.interarrival.mean();
        if !(self.m_tau > 0.0 && ((self.m_tau - mean) / mean).abs() <= 1e-12) {
            return Err(Error::invalid(
                "m_tau",
                format!("{} does not match the interarrival mean {mean}", self.m_tau),
            ));
        }
        Ok(())
    }
}

/// Renewal epochs on `(0, horizon]` from i.i.d. interarrival draws.
pub fn sample_renewal_events<R: Rng + ?Sized>(
    params: &SemiMarkovParams,
    horizon: f64,
    rng: &mut R,
) -> EventStream {
    let sampler = params.interarrival.sampler();
    let mut times = Vec::with_capacity((horizon / params.m_tau * 1.1) as usize + 4);
    let mut t = 0.0;
    loop {
        t += sampler.draw(rng);
        if t > horizon {
            break;
        }
        // Zero-length gaps (possible only through underflow) would break strict ordering.
        if times.last().is_some_and(|&last| t <= last) {
            continue;
        }
        times.push(t);
    }
    EventStream {
        times,
        marks: Vec::new(),
    }
}
