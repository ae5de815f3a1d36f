use serde::{Deserialize, Serialize};

use super::{solve_tridiagonal, Grid, HSurface, ProblemConfig, ProblemKind};
use crate::{Error, Result};

/// Time discretisation of the `h^2 / kappa` term.
///
/// Diffusion is always implicit. `Linearized` evaluates the quadratic as
/// `h^n h^{n+1} / kappa`, which folds into the diagonal of the implicit
/// matrix and reproduces the exact Riccati flow when `sigma_total = 0` and
/// `phi = 0`. `Explicit` uses `(h^{n+1})^2 / kappa` on the right-hand side
/// and is first order with a large error constant at practical step sizes.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadraticTerm {
    #[default]
    Linearized,
    Explicit,
}

/// Interior bands and work buffers, reused across time steps.
struct Stepper {
    lower: Vec<f64>,
    diag: Vec<f64>,
    upper: Vec<f64>,
    rhs: Vec<f64>,
    x: Vec<f64>,
    scratch: Vec<f64>,
}

impl Stepper {
    fn new(n_price: usize) -> Self {
        let k = n_price - 1;
        Self {
            lower: vec![0.0; k],
            diag: vec![0.0; k],
            upper: vec![0.0; k],
            rhs: vec![0.0; k],
            x: vec![0.0; k],
            scratch: vec![0.0; k],
        }
    }

    fn step(
        &mut self,
        h_next: &[f64],
        out: &mut [f64],
        config: &ProblemConfig,
        grid: &Grid,
        scheme: QuadraticTerm,
    ) -> Result<()> {
        let m = grid.n_price;
        let k = m - 1;
        let (dt, kappa) = (grid.dt, config.kappa);
        let sigma2 = config.dynamics.sigma_total * config.dynamics.sigma_total;
        let a = sigma2 * dt / (2.0 * grid.ds * grid.ds);
        let running = config.kind.sign() * dt * config.phi;

        for j in 0..k {
            let hn = h_next[j + 1];
            let (c, rhs) = match scheme {
                QuadraticTerm::Linearized => (dt * hn / kappa, hn + running),
                QuadraticTerm::Explicit => (0.0, hn - dt / kappa * hn * hn + running),
            };
            self.lower[j] = -a;
            self.diag[j] = 1.0 + 2.0 * a + c;
            self.upper[j] = -a;
            self.rhs[j] = rhs;
        }

        // The passive edge row reduces to (1 + c) h = rhs once h_SS = 0 is
        // substituted as h_edge = 2 h_adjacent - h_next_inner.
        let (active_row, passive_row) = match config.kind {
            ProblemKind::Acquisition => (k - 1, 0),
            ProblemKind::Liquidation => (0, k - 1),
        };
        self.rhs[active_row] += a * config.alpha;
        self.diag[passive_row] -= 2.0 * a;
        match config.kind {
            ProblemKind::Acquisition => {
                self.upper[k - 1] = 0.0;
                self.lower[0] = 0.0;
                self.upper[0] = 0.0;
            }
            ProblemKind::Liquidation => {
                self.lower[0] = 0.0;
                self.upper[k - 1] = 0.0;
                self.lower[k - 1] = 0.0;
            }
        }
        solve_tridiagonal(
            &self.lower,
            &self.diag,
            &self.upper,
            &self.rhs,
            &mut self.x,
            &mut self.scratch,
        )?;

        out[1..m].copy_from_slice(&self.x);
        match config.kind {
            ProblemKind::Acquisition => {
                out[m] = config.alpha;
                out[0] = 2.0 * out[1] - out[2];
            }
            ProblemKind::Liquidation => {
                out[0] = config.alpha;
                out[m] = 2.0 * out[m - 1] - out[m - 2];
            }
        }
        if let Some(bad) = out.iter().position(|v| !v.is_finite()) {
            return Err(Error::Solver(format!(
                "non-finite value at price node {bad}"
            )));
        }
        Ok(())
    }
}

/// One implicit step from the row at `t_{n+1}` to the row at `t_n`.
pub fn backward_step(
    h_next: &[f64],
    config: &ProblemConfig,
    grid: &Grid,
    scheme: QuadraticTerm,
) -> Result<Vec<f64>> {
    if h_next.len() != grid.n_price + 1 {
        return Err(Error::invalid(
            "h_next",
            format!(
                "expected {} entries, got {}",
                grid.n_price + 1,
                h_next.len()
            ),
        ));
    }
    let mut out = vec![0.0; h_next.len()];
    Stepper::new(grid.n_price).step(h_next, &mut out, config, grid, scheme)?;
    Ok(out)
}

/// Full backward sweep from `h(T, .) = alpha` with the default scheme.
pub fn solve_surface(config: &ProblemConfig, grid: &Grid) -> Result<HSurface> {
    solve_surface_with(config, grid, QuadraticTerm::default())
}

pub fn solve_surface_with(
    config: &ProblemConfig,
    grid: &Grid,
    scheme: QuadraticTerm,
) -> Result<HSurface> {
    config.validate()?;
    let expected = Grid::new(config, grid.n_time, grid.n_price)?;
    if expected != *grid {
        return Err(Error::invalid(
            "grid",
            "grid was not built for this configuration",
        ));
    }
    let width = grid.n_price + 1;
    let mut values = vec![0.0; (grid.n_time + 1) * width];
    values[grid.n_time * width..].fill(config.alpha);

    let mut stepper = Stepper::new(grid.n_price);
    for n in (0..grid.n_time).rev() {
        let (head, tail) = values.split_at_mut((n + 1) * width);
        stepper.step(&tail[..width], &mut head[n * width..], config, grid, scheme)?;
    }
    Ok(HSurface::from_parts(*grid, config.kind, values))
}
