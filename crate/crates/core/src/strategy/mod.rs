//! Monte Carlo execution of the feedback strategy and the Almgren-Chriss
//! benchmark on the solver's time grid.
//!
//! Each path draws its Brownian increments from its own stream keyed by
//! `(base_seed, path_id)`, so batches are reproducible and independent of the
//! number of worker threads.

mod batch;
mod execution;
pub mod export;
mod path;

pub use batch::{
    aggregate, histogram, run_batch, BatchOutput, HeatMap, Histogram, PathSummary, StopCounts,
    SummaryStats, HEATMAP_BINS, HISTOGRAM_BINS, SAMPLE_RECORDS,
};
pub use execution::{ac_speed, execution_price, optimal_speed, simulate_price_step};
pub use path::{
    ac_schedule, run_strategy_on_prices, run_strategy_path, simulate_prices, SimulationRecord,
    StopReason,
};
