use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use jumpexec_core::hjb::solve_surface;
use jumpexec_core::strategy::{export, run_batch};
use jumpexec_core::{Error as CoreError, HSurface, Lookup};
use serde::{Deserialize, Serialize};

use crate::config::{sha256_hex, RunConfig};
use crate::error::CliError;

pub const SURFACE_CSV: &str = "surface.csv";
pub const SURFACE_META: &str = "surface_meta.json";
pub const SIMULATE_META: &str = "simulate_meta.json";
pub const PATHS_CSV: &str = "paths.csv";
pub const HISTOGRAM_CSV: &str = "histogram.csv";
pub const HEATMAP_INVENTORY_CSV: &str = "heatmap_inventory.csv";
pub const HEATMAP_SPEED_CSV: &str = "heatmap_speed.csv";
pub const MEAN_CURVES_CSV: &str = "mean_curves.csv";
pub const STOP_REASONS_CSV: &str = "stop_reasons.csv";
pub const PATH_SUMMARY_CSV: &str = "path_summary.csv";

#[derive(Debug, Serialize, Deserialize)]
pub struct SurfaceMeta {
    pub config: RunConfig,
    pub config_digest: String,
    pub surface_checksum: String,
    pub grid: jumpexec_core::Grid,
    pub coefficients: jumpexec_core::CoefficientReport,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SimulateMeta {
    pub config_digest: String,
    pub surface_checksum: String,
    pub n_paths: u64,
    pub base_seed: u64,
    pub lookup: Lookup,
}

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>, CliError> {
    Ok(BufWriter::new(File::create(dir.join(name))?))
}

fn core_error(e: CoreError) -> CliError {
    match e {
        CoreError::Surface(msg) => CliError::Mismatch(msg),
        CoreError::InvalidParameter { .. }
        | CoreError::NonStationary { .. }
        | CoreError::NegativeRadicand { .. } => CliError::Config(e.to_string()),
        CoreError::Io(io) => CliError::Io(io),
        other => CliError::Solver(other),
    }
}

fn read_required(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|e| CliError::Missing(format!("{}: {e}", path.display())))
}

pub fn coeffs(config: &RunConfig) -> Result<(), CliError> {
    let (_, report) = config.coefficients()?;
    let json = serde_json::to_string_pretty(&report).map_err(|e| CliError::Other(e.to_string()))?;
    println!("{json}");
    Ok(())
}

pub fn solve(config: &RunConfig, out: &Path) -> Result<(), CliError> {
    let started = Instant::now();
    let resolved = config.resolve()?;
    let surface = solve_surface(&resolved.problem, &resolved.grid).map_err(CliError::Solver)?;

    fs::create_dir_all(out)?;
    let mut csv = Vec::new();
    surface.write_csv(&mut csv).map_err(core_error)?;
    fs::write(out.join(SURFACE_CSV), &csv)?;
    let meta = SurfaceMeta {
        config: config.clone(),
        config_digest: config.surface_digest(),
        surface_checksum: sha256_hex(&csv),
        grid: resolved.grid,
        coefficients: resolved.report,
    };
    let mut f = create(out, SURFACE_META)?;
    serde_json::to_writer_pretty(&mut f, &meta).map_err(|e| CliError::Other(e.to_string()))?;
    writeln!(f)?;
    f.flush()?;
    eprintln!(
        "solved {}x{} surface in {:.3} s -> {}",
        resolved.grid.n_time + 1,
        resolved.grid.n_price + 1,
        started.elapsed().as_secs_f64(),
        out.join(SURFACE_CSV).display()
    );
    Ok(())
}

/// Loads a surface written by [`solve`] and checks it belongs to `config`.
pub fn load_surface(config: &RunConfig, dir: &Path) -> Result<(HSurface, SurfaceMeta), CliError> {
    let resolved = config.resolve()?;
    let meta_bytes = read_required(&dir.join(SURFACE_META))?;
    let meta: SurfaceMeta = serde_json::from_slice(&meta_bytes)
        .map_err(|e| CliError::Mismatch(format!("{}: {e}", dir.join(SURFACE_META).display())))?;
    if meta.config_digest != config.surface_digest() {
        return Err(CliError::Mismatch(
            "surface was solved for different dynamics, problem or grid settings".into(),
        ));
    }
    let csv = read_required(&dir.join(SURFACE_CSV))?;
    if sha256_hex(&csv) != meta.surface_checksum {
        return Err(CliError::Mismatch(format!(
            "{} does not match the checksum recorded in {SURFACE_META}",
            dir.join(SURFACE_CSV).display()
        )));
    }
    let surface = HSurface::read_csv(&csv[..], resolved.grid, resolved.problem.kind)
        .map_err(|e| CliError::Mismatch(e.to_string()))?;
    Ok((surface, meta))
}

pub fn simulate(
    config: &RunConfig,
    surface_dir: &Path,
    out: &Path,
    lookup: Lookup,
) -> Result<(), CliError> {
    let started = Instant::now();
    let resolved = config.resolve()?;
    let (surface, meta) = load_surface(config, surface_dir)?;
    let batch = run_batch(
        &surface,
        &resolved.problem,
        config.sim.n_paths,
        config.sim.base_seed,
        lookup,
    )
    .map_err(core_error)?;

    fs::create_dir_all(out)?;
    let write = |name: &str,
                 f: &dyn Fn(&mut BufWriter<File>) -> jumpexec_core::Result<()>|
     -> Result<(), CliError> {
        let mut w = create(out, name)?;
        f(&mut w).map_err(core_error)?;
        w.flush()?;
        Ok(())
    };
    write(PATHS_CSV, &|w| export::write_paths_csv(&batch.samples, w))?;
    write(HISTOGRAM_CSV, &|w| {
        export::write_histogram_csv(&batch.stats, w)
    })?;
    write(HEATMAP_INVENTORY_CSV, &|w| {
        export::write_heatmap_csv(&batch.stats.inventory_heatmap, w)
    })?;
    write(HEATMAP_SPEED_CSV, &|w| {
        export::write_heatmap_csv(&batch.stats.speed_heatmap, w)
    })?;
    write(MEAN_CURVES_CSV, &|w| {
        export::write_mean_curves_csv(&batch.stats, w)
    })?;
    write(STOP_REASONS_CSV, &|w| {
        export::write_stop_reasons_csv(&batch.stats, w)
    })?;
    write(PATH_SUMMARY_CSV, &|w| {
        export::write_path_summary_csv(&batch.paths, w)
    })?;

    let sim_meta = SimulateMeta {
        config_digest: meta.config_digest,
        surface_checksum: meta.surface_checksum,
        n_paths: config.sim.n_paths,
        base_seed: config.sim.base_seed,
        lookup,
    };
    let mut f = create(out, SIMULATE_META)?;
    serde_json::to_writer_pretty(&mut f, &sim_meta).map_err(|e| CliError::Other(e.to_string()))?;
    writeln!(f)?;
    f.flush()?;
    eprintln!(
        "simulated {} paths in {:.3} s -> {}",
        config.sim.n_paths,
        started.elapsed().as_secs_f64(),
        out.display()
    );
    Ok(())
}

/// Aggregate figures printed by `report`.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub n_paths: usize,
    pub mean_price: f64,
    pub std_price: f64,
    pub stop_counts: Vec<(String, u64)>,
    /// Completion-time quantiles at 10%, 50% and 90%.
    pub completion_quantiles: [f64; 3],
}

fn csv_rows(path: &Path) -> Result<Vec<Vec<String>>, CliError> {
    let bytes = read_required(path)?;
    let text = String::from_utf8(bytes)
        .map_err(|e| CliError::Other(format!("{}: {e}", path.display())))?;
    Ok(text
        .lines()
        .skip(1)
        .filter(|l| !l.is_empty())
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect())
}

fn parse_f64(field: &str, path: &Path) -> Result<f64, CliError> {
    field
        .parse()
        .map_err(|_| CliError::Other(format!("{}: bad number `{field}`", path.display())))
}

/// Nearest-rank quantile of sorted data.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let rank = ((q * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len());
    sorted[rank - 1]
}

pub fn build_report(dir: &Path) -> Result<Report, CliError> {
    let summary_path = dir.join(PATH_SUMMARY_CSV);
    let stops_path = dir.join(STOP_REASONS_CSV);
    let summary = csv_rows(&summary_path)?;
    let stops = csv_rows(&stops_path)?;
    if summary.is_empty() {
        return Err(CliError::Missing(format!(
            "{} has no paths",
            summary_path.display()
        )));
    }
    let mut prices = Vec::with_capacity(summary.len());
    let mut times = Vec::with_capacity(summary.len());
    for row in &summary {
        if row.len() < 3 {
            return Err(CliError::Other(format!(
                "{}: short row",
                summary_path.display()
            )));
        }
        prices.push(parse_f64(&row[1], &summary_path)?);
        times.push(parse_f64(&row[2], &summary_path)?);
    }
    let n = prices.len() as f64;
    let mean = prices.iter().sum::<f64>() / n;
    let std = if prices.len() > 1 {
        (prices.iter().map(|p| (p - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    times.sort_by(f64::total_cmp);
    let stop_counts = stops
        .iter()
        .map(|row| {
            let count = row
                .get(1)
                .and_then(|c| c.parse().ok())
                .ok_or_else(|| CliError::Other(format!("{}: bad row", stops_path.display())))?;
            Ok((row[0].clone(), count))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(Report {
        n_paths: prices.len(),
        mean_price: mean,
        std_price: std,
        stop_counts,
        completion_quantiles: [
            quantile(&times, 0.1),
            quantile(&times, 0.5),
            quantile(&times, 0.9),
        ],
    })
}

pub fn report(dir: &Path) -> Result<(), CliError> {
    let r = build_report(dir)?;
    println!("paths: {}", r.n_paths);
    println!(
        "average execution price: mean {:.6}, std {:.6}",
        r.mean_price, r.std_price
    );
    println!("stop reasons:");
    for (reason, count) in &r.stop_counts {
        println!("  {reason}: {count}");
    }
    let [q10, q50, q90] = r.completion_quantiles;
    println!("completion time quantiles: p10 {q10:.4}, p50 {q50:.4}, p90 {q90:.4}");
    Ok(())
}
