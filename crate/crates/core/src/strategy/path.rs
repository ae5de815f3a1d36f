use serde::{Deserialize, Serialize};

use super::execution::{ac_speed, execution_price, optimal_speed, simulate_price_step};
use crate::hjb::{lookup_h, Grid, HSurface, Lookup, ProblemConfig, ProblemKind};
use crate::rng::{stream, Lane};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    Maturity,
    PriceBarrier,
    InventoryComplete,
}

impl StopReason {
    pub const ALL: [StopReason; 3] = [
        StopReason::Maturity,
        StopReason::PriceBarrier,
        StopReason::InventoryComplete,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            StopReason::Maturity => "maturity",
            StopReason::PriceBarrier => "price_barrier",
            StopReason::InventoryComplete => "inventory_complete",
        }
    }
}

/// One simulated execution. All series have one entry per solver time node.
///
/// Before the stop index `k < stop_step`, `inventories[k]`, `cash[k]` are the
/// state at `t_k` and `speeds[k]`, `exec_prices[k]` describe the trade over
/// `[t_k, t_{k+1})`. From `stop_step` on, inventory and cash are the settled
/// values after the terminal block trade, speed is zero and the execution
/// price is the per-unit block price. Prices keep evolving after the stop.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationRecord {
    pub path_id: u64,
    pub kind: ProblemKind,
    pub target_inventory: f64,
    pub times: Vec<f64>,
    pub prices: Vec<f64>,
    pub inventories: Vec<f64>,
    pub speeds: Vec<f64>,
    pub cash: Vec<f64>,
    pub exec_prices: Vec<f64>,
    pub stop_step: usize,
    pub stop_time: f64,
    pub stop_reason: StopReason,
    /// Inventory held at the stop, before the block trade.
    pub inventory_at_stop: f64,
    pub terminal_units: f64,
    pub average_execution_price: f64,
    /// Almgren-Chriss benchmark run on the same prices with the same stops.
    pub ac_inventories: Vec<f64>,
    pub ac_speeds: Vec<f64>,
}

impl SimulationRecord {
    pub fn final_cash(&self) -> f64 {
        *self.cash.last().expect("non-empty series")
    }

    pub fn stopped_at(&self, step: usize) -> bool {
        step >= self.stop_step
    }
}

/// Benchmark rates `nu_AC(t_k)` on every node of `grid`.
pub fn ac_schedule(config: &ProblemConfig, grid: &Grid) -> Result<Vec<f64>> {
    (0..=grid.n_time)
        .map(|k| ac_speed(grid.time(k), config))
        .collect()
}

/// Simulated midprice on the solver grid for `(base_seed, path_id)`.
pub fn simulate_prices(
    config: &ProblemConfig,
    grid: &Grid,
    base_seed: u64,
    path_id: u64,
) -> Vec<f64> {
    let mut rng = stream(base_seed, path_id, Lane::Diffusion);
    let mut prices = Vec::with_capacity(grid.n_time + 1);
    let mut s = config.s0;
    prices.push(s);
    for _ in 0..grid.n_time {
        s = simulate_price_step(s, grid.dt, &config.dynamics, &mut rng);
        prices.push(s);
    }
    prices
}

/// Runs the feedback strategy on a freshly simulated price path.
pub fn run_strategy_path(
    surface: &HSurface,
    config: &ProblemConfig,
    path_id: u64,
    base_seed: u64,
    lookup: Lookup,
) -> Result<SimulationRecord> {
    check_surface(surface, config)?;
    let ac = ac_schedule(config, surface.grid())?;
    let prices = simulate_prices(config, surface.grid(), base_seed, path_id);
    Ok(execute(surface, config, &ac, prices, path_id, lookup))
}

/// Runs the feedback strategy on a given price path (one price per node).
pub fn run_strategy_on_prices(
    surface: &HSurface,
    config: &ProblemConfig,
    prices: Vec<f64>,
    path_id: u64,
    lookup: Lookup,
) -> Result<SimulationRecord> {
    check_surface(surface, config)?;
    if prices.len() != surface.grid().n_time + 1 {
        return Err(Error::invalid(
            "prices",
            format!(
                "expected {} prices, got {}",
                surface.grid().n_time + 1,
                prices.len()
            ),
        ));
    }
    let ac = ac_schedule(config, surface.grid())?;
    Ok(execute(surface, config, &ac, prices, path_id, lookup))
}

pub(crate) fn check_surface(surface: &HSurface, config: &ProblemConfig) -> Result<()> {
    config.validate()?;
    let g = surface.grid();
    if surface.kind() != config.kind
        || g.horizon != config.horizon
        || g.s_min != config.s_min
        || g.s_max != config.s_max
    {
        return Err(Error::Surface(
            "surface was not solved for this problem".into(),
        ));
    }
    Ok(())
}

/// Remaining units to trade given the held inventory.
fn remaining(kind: ProblemKind, target: f64, held: f64) -> f64 {
    match kind {
        ProblemKind::Acquisition => target - held,
        ProblemKind::Liquidation => held,
    }
}

/// Held inventory once `remaining` units are left.
fn settled(kind: ProblemKind, target: f64) -> f64 {
    match kind {
        ProblemKind::Acquisition => target,
        ProblemKind::Liquidation => 0.0,
    }
}

fn apply_trade(kind: ProblemKind, held: f64, units: f64, capped: bool, target: f64) -> f64 {
    if capped {
        return settled(kind, target);
    }
    match kind {
        ProblemKind::Acquisition => held + units,
        ProblemKind::Liquidation => held - units,
    }
}

/// Per-unit price of the terminal block trade.
fn block_price(config: &ProblemConfig, price: f64, units: f64) -> f64 {
    price + config.kind.sign() * config.alpha * units
}

pub(crate) fn execute(
    surface: &HSurface,
    config: &ProblemConfig,
    ac: &[f64],
    prices: Vec<f64>,
    path_id: u64,
    lookup: Lookup,
) -> SimulationRecord {
    let grid = surface.grid();
    let (n, dt) = (grid.n_time, grid.dt);
    let kind = config.kind;
    let target = config.target_inventory;
    let start = match kind {
        ProblemKind::Acquisition => 0.0,
        ProblemKind::Liquidation => target,
    };

    let mut inventories = vec![0.0; n + 1];
    let mut speeds = vec![0.0; n + 1];
    let mut cash = vec![0.0; n + 1];
    let mut exec_prices = vec![0.0; n + 1];

    let mut held = start;
    let mut c = 0.0;
    let mut stop = None;
    for k in 0..=n {
        let left = remaining(kind, target, held);
        let reason = if left <= 0.0 {
            Some(StopReason::InventoryComplete)
        } else if config.barrier_hit(prices[k]) {
            Some(StopReason::PriceBarrier)
        } else if k == n {
            Some(StopReason::Maturity)
        } else {
            None
        };
        if let Some(reason) = reason {
            stop = Some((k, reason, held, left.max(0.0)));
            break;
        }
        inventories[k] = held;
        cash[k] = c;
        let h = lookup_h(surface, grid.time(k), prices[k], lookup);
        let mut nu = optimal_speed(h, left, config.kappa);
        let capped = nu * dt >= left;
        if capped {
            nu = left / dt;
        }
        let px = execution_price(prices[k], nu, config);
        speeds[k] = nu;
        exec_prices[k] = px;
        c += px * nu * dt;
        held = apply_trade(kind, held, nu * dt, capped, target);
    }
    let (stop_step, stop_reason, inventory_at_stop, terminal_units) =
        stop.expect("loop always stops at maturity");
    let px = block_price(config, prices[stop_step], terminal_units);
    c += terminal_units * px;
    let final_inventory = settled(kind, target);
    for k in stop_step..=n {
        inventories[k] = final_inventory;
        cash[k] = c;
        exec_prices[k] = px;
    }

    let (ac_inventories, ac_speeds) = benchmark(config, grid, ac, &prices, start);

    SimulationRecord {
        path_id,
        kind,
        target_inventory: target,
        times: grid.times().collect(),
        prices,
        inventories,
        speeds,
        cash,
        exec_prices,
        stop_step,
        stop_time: grid.time(stop_step),
        stop_reason,
        inventory_at_stop,
        terminal_units,
        average_execution_price: c / target,
        ac_inventories,
        ac_speeds,
    }
}

/// Almgren-Chriss schedule `dY = -Y nu_AC / kappa dt` with the same stops.
fn benchmark(
    config: &ProblemConfig,
    grid: &Grid,
    ac: &[f64],
    prices: &[f64],
    start: f64,
) -> (Vec<f64>, Vec<f64>) {
    let n = grid.n_time;
    let kind = config.kind;
    let target = config.target_inventory;
    let mut inventories = vec![settled(kind, target); n + 1];
    let mut speeds = vec![0.0; n + 1];
    let mut held = start;
    for k in 0..n {
        let left = remaining(kind, target, held);
        if left <= 0.0 || config.barrier_hit(prices[k]) {
            break;
        }
        inventories[k] = held;
        let mut nu = left * ac[k] / config.kappa;
        let capped = nu * grid.dt >= left;
        if capped {
            nu = left / grid.dt;
        }
        speeds[k] = nu;
        held = apply_trade(kind, held, nu * grid.dt, capped, target);
    }
    (inventories, speeds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{table1, table1_liquidation, with_sigma_total};
    use crate::hjb::solve_surface;

    fn setup(config: &ProblemConfig, n: usize, m: usize) -> HSurface {
        let grid = Grid::new(config, n, m).unwrap();
        solve_surface(config, &grid).unwrap()
    }

    fn cash_identity(r: &SimulationRecord, config: &ProblemConfig, dt: f64) -> f64 {
        let mut sum = 0.0;
        for k in 0..r.stop_step {
            sum += r.exec_prices[k] * r.speeds[k] * dt;
        }
        let s_tau = r.prices[r.stop_step];
        sum += r.terminal_units * (s_tau + config.kind.sign() * config.alpha * r.terminal_units);
        sum
    }

    #[test]
    fn pinned_at_barrier_stops_immediately() {
        let mut config = with_sigma_total(table1(), 0.0);
        config.phi = 0.0;
        config.s0 = config.s_max;
        let surface = setup(&config, 390, 200);
        let r = run_strategy_path(&surface, &config, 0, 7, Lookup::Nearest).unwrap();
        assert_eq!(r.stop_step, 0);
        assert_eq!(r.stop_reason, StopReason::PriceBarrier);
        assert_eq!(r.terminal_units, 1.0);
        let n = config.target_inventory;
        assert!((r.final_cash() - (config.s_max + config.alpha * n) * n).abs() < 1e-12);
    }

    #[test]
    fn deterministic_path_follows_exponential_inventory() {
        let mut config = with_sigma_total(table1(), 0.0);
        config.phi = 0.0;
        let (kappa, alpha, t_end) = (config.kappa, config.alpha, config.horizon);
        let mut worst_by_n = Vec::new();
        for n in [390usize, 780, 1560] {
            let surface = setup(&config, n, 100);
            let r = run_strategy_path(&surface, &config, 0, 1, Lookup::Nearest).unwrap();
            assert_eq!(r.stop_reason, StopReason::Maturity);
            let worst = (0..n)
                .map(|k| {
                    let t = r.times[k];
                    // Exact integral of the Riccati h over [0, t] divided by kappa.
                    let integral =
                        ((1.0 / alpha + t_end / kappa) / (1.0 / alpha + (t_end - t) / kappa)).ln();
                    (r.inventories[k] - (1.0 - (-integral).exp())).abs()
                })
                .fold(0.0, f64::max);
            worst_by_n.push((surface.grid().dt, worst));
        }
        // With the linearized surface, 1 - h_k dt / kappa = h_k / h_{k+1}, so
        // the product telescopes to the exact h(0) / h(t) up to rounding.
        for (dt, worst) in &worst_by_n {
            assert!(*worst <= *dt, "deviation {worst} vs dt {dt}");
            assert!(*worst < 1e-12, "deviation {worst}");
        }
    }

    #[test]
    fn identical_seeds_give_identical_records() {
        let config = table1();
        let surface = setup(&config, 390, 300);
        let a = run_strategy_path(&surface, &config, 3, 11, Lookup::Nearest).unwrap();
        let b = run_strategy_path(&surface, &config, 3, 11, Lookup::Nearest).unwrap();
        assert_eq!(a, b);
        let c = run_strategy_path(&surface, &config, 4, 11, Lookup::Nearest).unwrap();
        assert_ne!(a.prices, c.prices);
    }

    #[test]
    fn accounting_and_conservation_hold_on_many_paths() {
        for config in [table1(), table1_liquidation()] {
            let surface = setup(&config, 390, 400);
            let dt = surface.grid().dt;
            for id in 0..200 {
                for lookup in [Lookup::Nearest, Lookup::LinearInS] {
                    let r = run_strategy_path(&surface, &config, id, 5, lookup).unwrap();
                    let expected = cash_identity(&r, &config, dt);
                    assert!((r.final_cash() - expected).abs() <= 1e-9 * expected.abs());
                    let n = config.target_inventory;
                    match config.kind {
                        ProblemKind::Acquisition => {
                            assert_eq!(r.inventory_at_stop + r.terminal_units, n);
                            assert!(r.inventories.windows(2).all(|w| w[1] >= w[0]));
                        }
                        ProblemKind::Liquidation => {
                            assert_eq!(r.inventory_at_stop - r.terminal_units, 0.0);
                            assert!(r.inventories.windows(2).all(|w| w[1] <= w[0]));
                        }
                    }
                    assert!(r.speeds.iter().all(|&v| v >= 0.0));
                    assert!(r.stop_time <= config.horizon);
                    assert_eq!(r.times.len(), r.prices.len());
                    assert_eq!(r.cash.len(), r.prices.len());
                    assert!((r.average_execution_price - r.final_cash() / n).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn larger_varsigma_trades_no_later_on_common_paths() {
        let base = table1();
        let mut calm = base;
        calm.dynamics = crate::EffectiveDynamics::new(0.0, 0.1041, 0.01598, 0.0).unwrap();
        let grid = Grid::new(&base, 390, 400).unwrap();
        let h_calm = solve_surface(&calm, &grid).unwrap();
        let h_rough = solve_surface(&base, &grid).unwrap();
        for id in 0..100 {
            let prices = simulate_prices(&base, &grid, 9, id);
            let a = run_strategy_on_prices(&h_calm, &base, prices.clone(), id, Lookup::Nearest)
                .unwrap();
            let b = run_strategy_on_prices(&h_rough, &base, prices, id, Lookup::Nearest).unwrap();
            for k in 0..a.stop_step.min(b.stop_step) {
                assert!(
                    b.inventories[k] >= a.inventories[k] - 1e-12,
                    "path {id} step {k}"
                );
            }
        }
    }

    #[test]
    fn benchmark_ends_at_target_and_starts_at_origin() {
        let config = table1_liquidation();
        let surface = setup(&config, 390, 200);
        let r = run_strategy_path(&surface, &config, 0, 2, Lookup::Nearest).unwrap();
        assert_eq!(r.ac_inventories[0], 1.0);
        assert_eq!(*r.ac_inventories.last().unwrap(), 0.0);
        assert!(r.ac_inventories.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn rejects_surface_for_other_problem() {
        let surface = setup(&table1(), 390, 100);
        assert!(run_strategy_path(&surface, &table1_liquidation(), 0, 0, Lookup::Nearest).is_err());
    }
}
