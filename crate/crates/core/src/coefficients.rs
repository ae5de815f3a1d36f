//! Diffusion-approximation coefficients.
//!
//! The tick-level jump part of the midprice is replaced by a drift `eta`
//! (multiplying the permanent impact `g(nu)`) and two extra volatility
//! terms, `sigma_bar` and `varsigma`, for either a renewal (semi-Markov)
//! or a Hawkes event clock. The two-state tick chain takes values `±delta`
//! with continuation probabilities `p` (up after up) and `p'` (down after
//! down).

use serde::{Deserialize, Serialize};

use crate::microstructure::TickChainParams;
use crate::{Error, Result};

/// Long-run fraction of up-ticks, `(p' - 1) / (p + p' - 2)`.
pub fn pi_star(p: f64, p_prime: f64) -> Result<f64> {
    let denom = p + p_prime - 2.0;
    if denom == 0.0 {
        return Err(Error::invalid(
            "p_cont",
            "p = p' = 1 has no unique stationary law",
        ));
    }
    Ok((p_prime - 1.0) / denom)
}

/// Mean price move per event, `delta (2 pi - 1)`.
pub fn s_star(delta: f64, pi_star: f64) -> f64 {
    delta * (2.0 * pi_star - 1.0)
}

pub fn eta_sm(m_tau: f64, s_star: f64) -> Result<f64> {
    check_m_tau(m_tau)?;
    Ok(s_star / m_tau)
}

/// Per-event volatility of the semi-Markov approximation.
///
/// The radicand is `4 delta^2 (1 - p' + pi (p' - p)) / (p + p' - 2)^2`; the
/// result is its square root.
pub fn sigma_star_sm(delta: f64, p: f64, p_prime: f64) -> Result<f64> {
    let pi = pi_star(p, p_prime)?;
    let denom = p + p_prime - 2.0;
    let radicand = 4.0 * delta * delta * (1.0 - p_prime + pi * (p_prime - p)) / (denom * denom);
    checked_sqrt(radicand, "sigma_star_sm")
}

/// `sigma* / sqrt(m_tau)`.
pub fn varsigma_sm(sigma_star: f64, m_tau: f64) -> Result<f64> {
    check_m_tau(m_tau)?;
    Ok(sigma_star / m_tau.sqrt())
}

/// `sqrt(sigma*^2 / m_tau + Pi sigma^2 / m_tau)`.
pub fn sigma_bar_sm(sigma_star: f64, m_tau: f64, pi_const: f64, sigma: f64) -> Result<f64> {
    check_m_tau(m_tau)?;
    if !(pi_const >= 0.0) {
        return Err(Error::invalid(
            "pi_const",
            format!("must be >= 0, got {pi_const}"),
        ));
    }
    Ok(((sigma_star * sigma_star + pi_const * sigma * sigma) / m_tau).sqrt())
}

/// Stationary mean of the state map `a(±delta) = ±delta`.
pub fn a_star(pi_star: f64, delta: f64) -> f64 {
    delta * pi_star + (-delta) * (1.0 - pi_star)
}

pub fn eta_hp(a_star: f64, lambda_base: f64, mu_hat: f64) -> Result<f64> {
    Ok(a_star * stationary_rate(lambda_base, mu_hat)?)
}

/// Per-event volatility of the Hawkes approximation (two-state closed form).
pub fn sigma_star_hp(delta: f64, p: f64, p_prime: f64) -> Result<f64> {
    let pi = pi_star(p, p_prime)?;
    let denom = p + p_prime - 2.0;
    let inner = (1.0 - p_prime + pi * (p_prime - p)) / (denom * denom) - pi * (1.0 - pi);
    checked_sqrt(4.0 * delta * delta * inner, "sigma_star_hp")
}

/// `sigma* sqrt(lambda / (1 - mu_hat))`.
pub fn varsigma_hp(sigma_star: f64, lambda_base: f64, mu_hat: f64) -> Result<f64> {
    Ok(sigma_star * stationary_rate(lambda_base, mu_hat)?.sqrt())
}

/// `sqrt(sigma*^2 + (a* sqrt(lambda / (1 - mu_hat)))^2)`.
pub fn sigma_bar_hp(sigma_star: f64, a_star: f64, lambda_base: f64, mu_hat: f64) -> Result<f64> {
    let drift_vol = a_star * stationary_rate(lambda_base, mu_hat)?.sqrt();
    Ok((sigma_star * sigma_star + drift_vol * drift_vol).sqrt())
}

fn stationary_rate(lambda_base: f64, mu_hat: f64) -> Result<f64> {
    if !(lambda_base > 0.0 && lambda_base.is_finite()) {
        return Err(Error::invalid(
            "lambda_base",
            format!("must be > 0, got {lambda_base}"),
        ));
    }
    if mu_hat >= 1.0 {
        return Err(Error::NonStationary { mu_hat });
    }
    if !(mu_hat >= 0.0) {
        return Err(Error::invalid(
            "mu_hat",
            format!("must be >= 0, got {mu_hat}"),
        ));
    }
    Ok(lambda_base / (1.0 - mu_hat))
}

fn check_m_tau(m_tau: f64) -> Result<()> {
    if m_tau > 0.0 && m_tau.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid("m_tau", format!("must be > 0, got {m_tau}")))
    }
}

fn checked_sqrt(radicand: f64, what: &'static str) -> Result<f64> {
    // Round-off can push an exactly-zero radicand slightly negative.
    if radicand < -1e-15 {
        return Err(Error::NegativeRadicand { what, radicand });
    }
    Ok(radicand.max(0.0).sqrt())
}

/// Drift scale and total volatility of the approximated midprice
/// `dS = ±g(nu) eta dt + sigma_total dW`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffectiveDynamics {
    pub eta: f64,
    pub sigma: f64,
    pub sigma_bar: f64,
    pub varsigma: f64,
    pub sigma_total: f64,
}

impl EffectiveDynamics {
    pub fn new(eta: f64, sigma: f64, sigma_bar: f64, varsigma: f64) -> Result<Self> {
        for (name, v) in [
            ("sigma", sigma),
            ("sigma_bar", sigma_bar),
            ("varsigma", varsigma),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::invalid(
                    name,
                    format!("must be finite and >= 0, got {v}"),
                ));
            }
        }
        if !eta.is_finite() {
            return Err(Error::invalid("eta", "must be finite"));
        }
        Ok(Self {
            eta,
            sigma,
            sigma_bar,
            varsigma,
            sigma_total: (sigma * sigma + sigma_bar * sigma_bar + varsigma * varsigma).sqrt(),
        })
    }

    /// Pure diffusion with volatility `sigma`.
    pub fn pure_diffusion(sigma: f64) -> Result<Self> {
        Self::new(0.0, sigma, 0.0, 0.0)
    }
}

/// How `sigma_bar` is obtained in the semi-Markov case.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SigmaBarSm {
    /// Evaluate the closed form with the given `Pi` constant.
    FromPi(f64),
    /// Use a calibrated value as is.
    Calibrated(f64),
}

/// Inputs to [`effective_dynamics`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DynamicsSource {
    SemiMarkov {
        chain: TickChainParams,
        m_tau: f64,
        sigma: f64,
        sigma_bar: SigmaBarSm,
    },
    Hawkes {
        chain: TickChainParams,
        lambda_base: f64,
        mu_hat: f64,
        sigma: f64,
        /// Calibrated override; the closed form is used when absent.
        sigma_bar: Option<f64>,
    },
    Direct {
        sigma: f64,
        sigma_bar: f64,
        varsigma: f64,
        eta: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceKind {
    Sm,
    Hp,
    Direct,
}

/// Every intermediate of an [`effective_dynamics`] evaluation.
///
/// Chain-derived fields are `None` in direct mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoefficientReport {
    pub pi_star: Option<f64>,
    pub s_star: Option<f64>,
    pub a_star: Option<f64>,
    pub sigma_star: Option<f64>,
    pub sigma_bar: f64,
    pub varsigma: f64,
    pub eta: f64,
    pub sigma_total: f64,
    pub source: SourceKind,
}

pub fn effective_dynamics(
    source: &DynamicsSource,
) -> Result<(EffectiveDynamics, CoefficientReport)> {
    let (dynamics, pi, s, a, sigma_star, kind) = match *source {
        DynamicsSource::SemiMarkov {
            chain,
            m_tau,
            sigma,
            sigma_bar,
        } => {
            chain.validate()?;
            let pi = pi_star(chain.p_cont, chain.p_cont_prime)?;
            let s = s_star(chain.delta, pi);
            let sigma_star = sigma_star_sm(chain.delta, chain.p_cont, chain.p_cont_prime)?;
            let bar = match sigma_bar {
                SigmaBarSm::FromPi(pi_const) => sigma_bar_sm(sigma_star, m_tau, pi_const, sigma)?,
                SigmaBarSm::Calibrated(v) => v,
            };
            let dynamics = EffectiveDynamics::new(
                eta_sm(m_tau, s)?,
                sigma,
                bar,
                varsigma_sm(sigma_star, m_tau)?,
            )?;
            (
                dynamics,
                Some(pi),
                Some(s),
                None,
                Some(sigma_star),
                SourceKind::Sm,
            )
        }
        DynamicsSource::Hawkes {
            chain,
            lambda_base,
            mu_hat,
            sigma,
            sigma_bar,
        } => {
            chain.validate()?;
            let pi = pi_star(chain.p_cont, chain.p_cont_prime)?;
            let a = a_star(pi, chain.delta);
            let sigma_star = sigma_star_hp(chain.delta, chain.p_cont, chain.p_cont_prime)?;
            let bar = match sigma_bar {
                Some(v) => v,
                None => sigma_bar_hp(sigma_star, a, lambda_base, mu_hat)?,
            };
            let dynamics = EffectiveDynamics::new(
                eta_hp(a, lambda_base, mu_hat)?,
                sigma,
                bar,
                varsigma_hp(sigma_star, lambda_base, mu_hat)?,
            )?;
            (
                dynamics,
                Some(pi),
                None,
                Some(a),
                Some(sigma_star),
                SourceKind::Hp,
            )
        }
        DynamicsSource::Direct {
            sigma,
            sigma_bar,
            varsigma,
            eta,
        } => (
            EffectiveDynamics::new(eta, sigma, sigma_bar, varsigma)?,
            None,
            None,
            None,
            None,
            SourceKind::Direct,
        ),
    };
    let report = CoefficientReport {
        pi_star: pi,
        s_star: s,
        a_star: a,
        sigma_star,
        sigma_bar: dynamics.sigma_bar,
        varsigma: dynamics.varsigma,
        eta: dynamics.eta,
        sigma_total: dynamics.sigma_total,
        source: kind,
    };
    Ok((dynamics, report))
}
