//! Solver and strategy simulation working together on the calibrated inputs.

use jumpexec_core::hjb::{solve_surface, Grid};
use jumpexec_core::strategy::run_batch;
use jumpexec_core::{EffectiveDynamics, Lookup, ProblemConfig, ProblemKind};

fn acquisition(varsigma: f64) -> ProblemConfig {
    ProblemConfig {
        kind: ProblemKind::Acquisition,
        s0: 30.97,
        horizon: 1.0,
        s_min: 29.0,
        s_max: 31.1,
        alpha: 0.01,
        kappa: 1e-4,
        phi: 1e-5,
        b_perm: 0.0,
        spread: 0.01,
        target_inventory: 1.0,
        dynamics: EffectiveDynamics::new(0.0, 0.1041, 0.01598, varsigma).unwrap(),
    }
}

fn liquidation(varsigma: f64) -> ProblemConfig {
    ProblemConfig {
        kind: ProblemKind::Liquidation,
        s_min: 30.8,
        s_max: 33.0,
        ..acquisition(varsigma)
    }
}

fn mean(xs: impl Iterator<Item = f64>) -> (f64, f64) {
    let v: Vec<f64> = xs.collect();
    let n = v.len() as f64;
    let m = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m, (var / n).sqrt())
}

#[test]
fn average_prices_sit_between_start_and_barrier() {
    let config = acquisition(0.1323);
    let grid = Grid::new(&config, 390, 1000).unwrap();
    let surface = solve_surface(&config, &grid).unwrap();
    let out = run_batch(&surface, &config, 2000, 1, Lookup::Nearest).unwrap();
    let (m, _) = mean(out.paths.iter().map(|p| p.average_execution_price));
    assert!(m > config.s0 && m < config.s_max, "mean average price {m}");
    // Half spread plus at most a few alpha of impact and penalty.
    assert!(
        m - config.s0 < config.spread / 2.0 + 5.0 * config.alpha + 0.1,
        "{m}"
    );

    let config = liquidation(0.1323);
    let grid = Grid::new(&config, 390, 1000).unwrap();
    let surface = solve_surface(&config, &grid).unwrap();
    let out = run_batch(&surface, &config, 2000, 1, Lookup::Nearest).unwrap();
    let (m, _) = mean(out.paths.iter().map(|p| p.average_execution_price));
    assert!(m < config.s0 && m > config.s_min, "mean average price {m}");
}

#[test]
fn jump_volatility_brings_early_stops_forward() {
    let mut early = Vec::new();
    for varsigma in [0.0, 0.1323, 0.2646] {
        let config = acquisition(varsigma);
        let grid = Grid::new(&config, 390, 500).unwrap();
        let surface = solve_surface(&config, &grid).unwrap();
        let out = run_batch(&surface, &config, 2000, 5, Lookup::Nearest).unwrap();
        early.push(out.stats.stop_reason_counts.early());
    }
    assert!(early[0] < early[1] && early[1] < early[2], "{early:?}");
}

#[test]
fn midprice_is_a_martingale() {
    let config = liquidation(0.1323);
    let grid = Grid::new(&config, 390, 300).unwrap();
    let surface = solve_surface(&config, &grid).unwrap();
    let out = run_batch(&surface, &config, 4000, 9, Lookup::LinearInS).unwrap();
    let (m, se) = mean(out.paths.iter().map(|p| p.final_price));
    assert!((m - config.s0).abs() < 3.0 * se, "mean {m}, se {se}");
}

#[test]
fn benchmark_and_strategy_both_complete() {
    let config = acquisition(0.1323);
    let grid = Grid::new(&config, 390, 300).unwrap();
    let surface = solve_surface(&config, &grid).unwrap();
    let out = run_batch(&surface, &config, 500, 3, Lookup::Nearest).unwrap();
    let st = &out.stats;
    assert_eq!(*st.mean_inventory_curve.last().unwrap(), 1.0);
    assert_eq!(*st.ac_mean_inventory_curve.last().unwrap(), 1.0);
    // Until the first stops the feedback strategy front-loads at least as
    // much as the benchmark since h exceeds the deterministic rate.
    assert!(st.mean_inventory_curve[10] >= st.ac_mean_inventory_curve[10] - 1e-12);
}
