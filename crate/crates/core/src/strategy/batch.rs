use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::path::{
    ac_schedule, check_surface, execute, simulate_prices, SimulationRecord, StopReason,
};
use crate::hjb::{HSurface, Lookup, ProblemConfig};
use crate::{Error, Result};

pub const HISTOGRAM_BINS: usize = 50;
pub const HEATMAP_BINS: usize = 100;
/// Number of leading records kept in full by [`run_batch`].
pub const SAMPLE_RECORDS: usize = 5;
/// Paths per work unit. Partial sums are merged in block order, so results do
/// not depend on the rayon pool size.
const BLOCK: u64 = 64;
/// Blocks processed per parallel wave (bounds peak memory).
const WAVE: u64 = 32;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    /// `bins + 1` edges; all equal when every sample coincides.
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
}

/// Time-by-value counts, row-major in time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeatMap {
    pub times: Vec<f64>,
    pub value_edges: Vec<f64>,
    pub counts: Vec<u64>,
}

impl HeatMap {
    fn empty(times: Vec<f64>, hi: f64) -> Self {
        let value_edges = (0..=HEATMAP_BINS)
            .map(|j| hi * j as f64 / HEATMAP_BINS as f64)
            .collect();
        let counts = vec![0; times.len() * HEATMAP_BINS];
        HeatMap {
            times,
            value_edges,
            counts,
        }
    }

    pub fn row(&self, k: usize) -> &[u64] {
        &self.counts[k * HEATMAP_BINS..(k + 1) * HEATMAP_BINS]
    }

    fn add(&mut self, k: usize, value: f64) {
        let hi = *self.value_edges.last().unwrap();
        let j = if hi > 0.0 {
            ((value / hi * HEATMAP_BINS as f64).floor().max(0.0) as usize).min(HEATMAP_BINS - 1)
        } else {
            0
        };
        self.counts[k * HEATMAP_BINS + j] += 1;
    }

    fn merge(&mut self, other: &HeatMap) {
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StopCounts {
    pub maturity: u64,
    pub price_barrier: u64,
    pub inventory_complete: u64,
}

impl StopCounts {
    pub fn get(&self, reason: StopReason) -> u64 {
        match reason {
            StopReason::Maturity => self.maturity,
            StopReason::PriceBarrier => self.price_barrier,
            StopReason::InventoryComplete => self.inventory_complete,
        }
    }

    /// Stops before maturity.
    pub fn early(&self) -> u64 {
        self.price_barrier + self.inventory_complete
    }

    pub fn total(&self) -> u64 {
        self.maturity + self.early()
    }

    fn add(&mut self, reason: StopReason) {
        match reason {
            StopReason::Maturity => self.maturity += 1,
            StopReason::PriceBarrier => self.price_barrier += 1,
            StopReason::InventoryComplete => self.inventory_complete += 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub n_paths: u64,
    pub times: Vec<f64>,
    pub avg_exec_price_histogram: Histogram,
    pub inventory_heatmap: HeatMap,
    pub speed_heatmap: HeatMap,
    pub mean_inventory_curve: Vec<f64>,
    pub mean_speed_curve: Vec<f64>,
    pub ac_mean_inventory_curve: Vec<f64>,
    pub ac_mean_speed_curve: Vec<f64>,
    pub stop_reason_counts: StopCounts,
}

/// Per-path scalars kept for every path of a batch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathSummary {
    pub path_id: u64,
    pub average_execution_price: f64,
    pub stop_time: f64,
    pub stop_reason: StopReason,
    pub terminal_units: f64,
    pub price_at_stop: f64,
    pub final_price: f64,
}

impl From<&SimulationRecord> for PathSummary {
    fn from(r: &SimulationRecord) -> Self {
        PathSummary {
            path_id: r.path_id,
            average_execution_price: r.average_execution_price,
            stop_time: r.stop_time,
            stop_reason: r.stop_reason,
            terminal_units: r.terminal_units,
            price_at_stop: r.prices[r.stop_step],
            final_price: *r.prices.last().unwrap(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BatchOutput {
    /// The first [`SAMPLE_RECORDS`] records (fewer if the batch is smaller).
    pub samples: Vec<SimulationRecord>,
    pub paths: Vec<PathSummary>,
    pub stats: SummaryStats,
}

/// Partial sums over a contiguous run of paths.
struct Accumulator {
    n: u64,
    sum_q: Vec<f64>,
    sum_nu: Vec<f64>,
    sum_ac_q: Vec<f64>,
    sum_ac_nu: Vec<f64>,
    inventory: HeatMap,
    speed: HeatMap,
    stops: StopCounts,
}

impl Accumulator {
    fn new(times: &[f64], config: &ProblemConfig) -> Self {
        let len = times.len();
        let target = config.target_inventory;
        Accumulator {
            n: 0,
            sum_q: vec![0.0; len],
            sum_nu: vec![0.0; len],
            sum_ac_q: vec![0.0; len],
            sum_ac_nu: vec![0.0; len],
            inventory: HeatMap::empty(times.to_vec(), target),
            speed: HeatMap::empty(times.to_vec(), target * config.alpha / config.kappa),
            stops: StopCounts::default(),
        }
    }

    fn push(&mut self, r: &SimulationRecord) {
        self.n += 1;
        for k in 0..self.sum_q.len() {
            self.sum_q[k] += r.inventories[k];
            self.sum_nu[k] += r.speeds[k];
            self.sum_ac_q[k] += r.ac_inventories[k];
            self.sum_ac_nu[k] += r.ac_speeds[k];
            self.inventory.add(k, r.inventories[k]);
            self.speed.add(k, r.speeds[k]);
        }
        self.stops.add(r.stop_reason);
    }

    fn merge(&mut self, other: &Accumulator) {
        self.n += other.n;
        for k in 0..self.sum_q.len() {
            self.sum_q[k] += other.sum_q[k];
            self.sum_nu[k] += other.sum_nu[k];
            self.sum_ac_q[k] += other.sum_ac_q[k];
            self.sum_ac_nu[k] += other.sum_ac_nu[k];
        }
        self.inventory.merge(&other.inventory);
        self.speed.merge(&other.speed);
        self.stops.maturity += other.stops.maturity;
        self.stops.price_barrier += other.stops.price_barrier;
        self.stops.inventory_complete += other.stops.inventory_complete;
    }

    fn finish(self, times: Vec<f64>, avg_prices: &[f64]) -> SummaryStats {
        let n = self.n as f64;
        let mean = |v: Vec<f64>| v.into_iter().map(|x| x / n).collect::<Vec<_>>();
        SummaryStats {
            n_paths: self.n,
            times,
            avg_exec_price_histogram: histogram(avg_prices, HISTOGRAM_BINS),
            inventory_heatmap: self.inventory,
            speed_heatmap: self.speed,
            mean_inventory_curve: mean(self.sum_q),
            mean_speed_curve: mean(self.sum_nu),
            ac_mean_inventory_curve: mean(self.sum_ac_q),
            ac_mean_speed_curve: mean(self.sum_ac_nu),
            stop_reason_counts: self.stops,
        }
    }
}

/// Uniform histogram over the observed range of `values`.
pub fn histogram(values: &[f64], bins: usize) -> Histogram {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let width = (hi - lo) / bins as f64;
    let edges = (0..=bins)
        .map(|j| if j == bins { hi } else { lo + width * j as f64 })
        .collect();
    let mut counts = vec![0u64; bins];
    for &v in values {
        let j = if width > 0.0 {
            (((v - lo) / width).floor() as usize).min(bins - 1)
        } else {
            0
        };
        counts[j] += 1;
    }
    Histogram { edges, counts }
}

/// Summary statistics of a set of records from one problem.
pub fn aggregate(records: &[SimulationRecord], config: &ProblemConfig) -> Result<SummaryStats> {
    let first = records
        .first()
        .ok_or_else(|| Error::invalid("records", "need at least one record"))?;
    let mut acc = Accumulator::new(&first.times, config);
    for r in records {
        if r.times.len() != first.times.len() {
            return Err(Error::invalid(
                "records",
                "records come from different grids",
            ));
        }
        acc.push(r);
    }
    let avg: Vec<f64> = records.iter().map(|r| r.average_execution_price).collect();
    Ok(acc.finish(first.times.clone(), &avg))
}

/// Runs `n_paths` independent paths (path `i` seeded from `(base_seed, i)`).
pub fn run_batch(
    surface: &HSurface,
    config: &ProblemConfig,
    n_paths: u64,
    base_seed: u64,
    lookup: Lookup,
) -> Result<BatchOutput> {
    if n_paths == 0 {
        return Err(Error::invalid("n_paths", "must be >= 1"));
    }
    check_surface(surface, config)?;
    let grid = surface.grid();
    let ac = ac_schedule(config, grid)?;
    let times: Vec<f64> = grid.times().collect();

    let n_blocks = n_paths.div_ceil(BLOCK);
    let run_block = |b: u64| {
        let mut acc = Accumulator::new(&times, config);
        let mut summaries = Vec::new();
        let mut samples = Vec::new();
        for id in b * BLOCK..((b + 1) * BLOCK).min(n_paths) {
            let prices = simulate_prices(config, grid, base_seed, id);
            let r = execute(surface, config, &ac, prices, id, lookup);
            acc.push(&r);
            summaries.push(PathSummary::from(&r));
            if (id as usize) < SAMPLE_RECORDS {
                samples.push(r);
            }
        }
        (acc, summaries, samples)
    };

    let mut total = Accumulator::new(&times, config);
    let mut paths = Vec::with_capacity(n_paths as usize);
    let mut samples = Vec::new();
    let mut wave_start = 0;
    while wave_start < n_blocks {
        let wave_end = (wave_start + WAVE).min(n_blocks);
        let parts: Vec<_> = (wave_start..wave_end)
            .into_par_iter()
            .map(run_block)
            .collect();
        for (acc, summaries, s) in parts {
            total.merge(&acc);
            paths.extend(summaries);
            samples.extend(s);
        }
        wave_start = wave_end;
    }
    let avg: Vec<f64> = paths.iter().map(|p| p.average_execution_price).collect();
    let stats = total.finish(times, &avg);
    Ok(BatchOutput {
        samples,
        paths,
        stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{table1, table1_liquidation};
    use crate::hjb::{solve_surface, Grid};
    use crate::strategy::run_strategy_path;

    fn surface(config: &ProblemConfig) -> HSurface {
        solve_surface(config, &Grid::new(config, 390, 300).unwrap()).unwrap()
    }

    #[test]
    fn single_path_batch_degenerates() {
        let config = table1();
        let s = surface(&config);
        let out = run_batch(&s, &config, 1, 3, Lookup::Nearest).unwrap();
        let r = run_strategy_path(&s, &config, 0, 3, Lookup::Nearest).unwrap();
        assert_eq!(out.samples, vec![r.clone()]);
        assert_eq!(out.stats.mean_inventory_curve, r.inventories);
        assert_eq!(out.stats.stop_reason_counts.get(r.stop_reason), 1);
        let occupied: Vec<_> = out
            .stats
            .avg_exec_price_histogram
            .counts
            .iter()
            .filter(|&&c| c > 0)
            .collect();
        assert_eq!(occupied, vec![&1]);
    }

    #[test]
    fn identical_records_fill_one_bin() {
        let config = table1();
        let s = surface(&config);
        let r = run_strategy_path(&s, &config, 0, 3, Lookup::Nearest).unwrap();
        let stats = aggregate(&vec![r; 7], &config).unwrap();
        let h = &stats.avg_exec_price_histogram;
        assert_eq!(h.counts[0], 7);
        assert_eq!(h.counts.iter().sum::<u64>(), 7);
    }

    #[test]
    fn batch_agrees_with_aggregate_of_individual_paths() {
        let config = table1_liquidation();
        let s = surface(&config);
        let out = run_batch(&s, &config, 150, 21, Lookup::Nearest).unwrap();
        let records: Vec<_> = (0..150)
            .map(|i| run_strategy_path(&s, &config, i, 21, Lookup::Nearest).unwrap())
            .collect();
        let direct = aggregate(&records, &config).unwrap();
        assert_eq!(out.stats.stop_reason_counts, direct.stop_reason_counts);
        assert_eq!(out.stats.inventory_heatmap, direct.inventory_heatmap);
        assert_eq!(
            out.stats.avg_exec_price_histogram,
            direct.avg_exec_price_histogram
        );
        for (a, b) in out
            .stats
            .mean_inventory_curve
            .iter()
            .zip(&direct.mean_inventory_curve)
        {
            assert!((a - b).abs() < 1e-12);
        }
        assert_eq!(out.samples.len(), SAMPLE_RECORDS);
        assert_eq!(out.samples[..], records[..SAMPLE_RECORDS]);
    }

    #[test]
    fn summary_invariants() {
        for config in [table1(), table1_liquidation()] {
            let s = surface(&config);
            let out = run_batch(&s, &config, 300, 8, Lookup::Nearest).unwrap();
            let st = &out.stats;
            assert_eq!(st.avg_exec_price_histogram.counts.iter().sum::<u64>(), 300);
            assert_eq!(st.stop_reason_counts.total(), 300);
            for k in 0..st.times.len() {
                assert!(st.inventory_heatmap.row(k).iter().sum::<u64>() <= 300);
                assert!(st.speed_heatmap.row(k).iter().sum::<u64>() <= 300);
            }
            let (first, last) = match config.kind {
                crate::ProblemKind::Acquisition => (0.0, 1.0),
                crate::ProblemKind::Liquidation => (1.0, 0.0),
            };
            assert_eq!(st.mean_inventory_curve[0], first);
            assert!((st.mean_inventory_curve.last().unwrap() - last).abs() < 1e-12);
            assert!((st.ac_mean_inventory_curve.last().unwrap() - last).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_empty_inputs() {
        let config = table1();
        let s = surface(&config);
        assert!(run_batch(&s, &config, 0, 0, Lookup::Nearest).is_err());
        assert!(aggregate(&[], &config).is_err());
    }

    #[test]
    fn histogram_edges_span_range() {
        let h = histogram(&[1.0, 2.0, 3.0, 5.0], 4);
        assert_eq!(h.edges, vec![1.0, 2.0, 3.0, 4.0, 5.0]);
        assert_eq!(h.counts, vec![1, 1, 1, 1]);
    }
}
