use std::path::Path;

use jumpexec_core::coefficients::{
    effective_dynamics, CoefficientReport, DynamicsSource, SigmaBarSm,
};
use jumpexec_core::{EffectiveDynamics, Grid, ProblemConfig, ProblemKind, TickChainParams};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliError;

/// Full run description loaded from JSON. Unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub dynamics: DynamicsBlock,
    pub problem: ProblemBlock,
    pub grid: GridBlock,
    pub sim: SimBlock,
}

/// Exactly one of the three modes must be present.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DynamicsBlock {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sm: Option<SmBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hp: Option<HpBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direct: Option<DirectBlock>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SmBlock {
    pub delta: f64,
    pub p_cont: f64,
    pub p_cont_prime: f64,
    pub m_tau: f64,
    pub sigma: f64,
    /// `{"from_pi": Pi}` or `{"calibrated": value}`.
    pub sigma_bar: SigmaBarSm,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HpBlock {
    pub delta: f64,
    pub p_cont: f64,
    pub p_cont_prime: f64,
    pub lambda_base: f64,
    pub mu_hat: f64,
    pub sigma: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma_bar: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DirectBlock {
    pub sigma: f64,
    pub sigma_bar: f64,
    pub varsigma: f64,
    #[serde(default)]
    pub eta: f64,
}

fn default_spread() -> f64 {
    0.01
}

fn default_target() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemBlock {
    pub kind: ProblemKind,
    pub s0: f64,
    pub horizon: f64,
    pub s_min: f64,
    pub s_max: f64,
    pub alpha: f64,
    pub kappa: f64,
    pub phi: f64,
    #[serde(default = "default_spread")]
    pub spread: f64,
    #[serde(default = "default_target")]
    pub target_inventory: f64,
    #[serde(default)]
    pub b_perm: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridBlock {
    pub n_time: usize,
    pub n_price: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimBlock {
    pub n_paths: u64,
    pub base_seed: u64,
}

/// Everything derived from a validated [`RunConfig`].
pub struct Resolved {
    pub problem: ProblemConfig,
    pub grid: Grid,
    pub report: CoefficientReport,
}

impl DynamicsBlock {
    pub fn source(&self) -> Result<DynamicsSource, CliError> {
        let present: Vec<&str> = [
            ("sm", self.sm.is_some()),
            ("hp", self.hp.is_some()),
            ("direct", self.direct.is_some()),
        ]
        .into_iter()
        .filter_map(|(name, on)| on.then_some(name))
        .collect();
        match (present.len(), self.sm, self.hp, self.direct) {
            (1, Some(b), _, _) => Ok(DynamicsSource::SemiMarkov {
                chain: TickChainParams::new(b.delta, b.p_cont, b.p_cont_prime)
                    .map_err(CliError::config("dynamics.sm"))?,
                m_tau: b.m_tau,
                sigma: b.sigma,
                sigma_bar: b.sigma_bar,
            }),
            (1, _, Some(b), _) => Ok(DynamicsSource::Hawkes {
                chain: TickChainParams::new(b.delta, b.p_cont, b.p_cont_prime)
                    .map_err(CliError::config("dynamics.hp"))?,
                lambda_base: b.lambda_base,
                mu_hat: b.mu_hat,
                sigma: b.sigma,
                sigma_bar: b.sigma_bar,
            }),
            (1, _, _, Some(b)) => Ok(DynamicsSource::Direct {
                sigma: b.sigma,
                sigma_bar: b.sigma_bar,
                varsigma: b.varsigma,
                eta: b.eta,
            }),
            (0, ..) => Err(CliError::Config(
                "dynamics: one of `sm`, `hp` or `direct` is required".into(),
            )),
            _ => Err(CliError::Config(format!(
                "dynamics: conflicting dynamics modes ({}); exactly one is allowed",
                present.join(", ")
            ))),
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Missing(format!("{}: {e}", path.display())))?;
        let config: RunConfig = serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        config.resolve()?;
        Ok(config)
    }

    pub fn coefficients(&self) -> Result<(EffectiveDynamics, CoefficientReport), CliError> {
        effective_dynamics(&self.dynamics.source()?).map_err(CliError::config("dynamics"))
    }

    pub fn resolve(&self) -> Result<Resolved, CliError> {
        let (dynamics, report) = self.coefficients()?;
        let p = self.problem;
        let problem = ProblemConfig {
            kind: p.kind,
            s0: p.s0,
            horizon: p.horizon,
            s_min: p.s_min,
            s_max: p.s_max,
            alpha: p.alpha,
            kappa: p.kappa,
            phi: p.phi,
            b_perm: p.b_perm,
            spread: p.spread,
            target_inventory: p.target_inventory,
            dynamics,
        };
        problem.validate().map_err(CliError::config("problem"))?;
        if self.sim.n_paths == 0 {
            return Err(CliError::Config("sim.n_paths: must be >= 1".into()));
        }
        // A too-coarse time step is a solver failure, other grid errors are config errors.
        let grid =
            Grid::new(&problem, self.grid.n_time, self.grid.n_price).map_err(|e| match e {
                jumpexec_core::Error::Unstable { .. } => CliError::Solver(e),
                other => CliError::config("grid")(other),
            })?;
        Ok(Resolved {
            problem,
            grid,
            report,
        })
    }

    /// Digest of the blocks that determine the surface (the `sim` block is
    /// excluded so path counts and seeds can change without re-solving).
    pub fn surface_digest(&self) -> String {
        #[derive(Serialize)]
        struct Key<'a> {
            dynamics: &'a DynamicsBlock,
            problem: &'a ProblemBlock,
            grid: &'a GridBlock,
        }
        let bytes = serde_json::to_vec(&Key {
            dynamics: &self.dynamics,
            problem: &self.problem,
            grid: &self.grid,
        })
        .expect("config serializes");
        sha256_hex(&bytes)
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}
