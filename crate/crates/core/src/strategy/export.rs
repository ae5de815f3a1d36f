//! CSV writers for simulation output. Floats use Rust's shortest round-trip
//! formatting, so output bytes are a pure function of the values.

use std::io::Write;

use super::batch::{HeatMap, PathSummary, SummaryStats};
use super::path::{SimulationRecord, StopReason};
use crate::Result;

pub fn write_paths_csv<W: Write>(records: &[SimulationRecord], mut out: W) -> Result<()> {
    writeln!(out, "path_id,step,t,S,Q,nu,cash,exec_price,stopped")?;
    for r in records {
        for k in 0..r.times.len() {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                r.path_id,
                k,
                r.times[k],
                r.prices[k],
                r.inventories[k],
                r.speeds[k],
                r.cash[k],
                r.exec_prices[k],
                u8::from(r.stopped_at(k))
            )?;
        }
    }
    Ok(())
}

pub fn write_histogram_csv<W: Write>(stats: &SummaryStats, mut out: W) -> Result<()> {
    let h = &stats.avg_exec_price_histogram;
    writeln!(out, "bin_lo,bin_hi,count")?;
    for (j, c) in h.counts.iter().enumerate() {
        writeln!(out, "{},{},{}", h.edges[j], h.edges[j + 1], c)?;
    }
    Ok(())
}

pub fn write_heatmap_csv<W: Write>(map: &HeatMap, mut out: W) -> Result<()> {
    writeln!(out, "t,bin_lo,bin_hi,count")?;
    let bins = map.value_edges.len() - 1;
    for (k, t) in map.times.iter().enumerate() {
        for (j, c) in map.row(k).iter().enumerate().take(bins) {
            writeln!(
                out,
                "{},{},{},{}",
                t,
                map.value_edges[j],
                map.value_edges[j + 1],
                c
            )?;
        }
    }
    Ok(())
}

pub fn write_mean_curves_csv<W: Write>(stats: &SummaryStats, mut out: W) -> Result<()> {
    writeln!(out, "t,mean_Q,mean_nu,ac_Q,ac_nu")?;
    for k in 0..stats.times.len() {
        writeln!(
            out,
            "{},{},{},{},{}",
            stats.times[k],
            stats.mean_inventory_curve[k],
            stats.mean_speed_curve[k],
            stats.ac_mean_inventory_curve[k],
            stats.ac_mean_speed_curve[k]
        )?;
    }
    Ok(())
}

pub fn write_stop_reasons_csv<W: Write>(stats: &SummaryStats, mut out: W) -> Result<()> {
    writeln!(out, "reason,count")?;
    for reason in StopReason::ALL {
        writeln!(
            out,
            "{},{}",
            reason.as_str(),
            stats.stop_reason_counts.get(reason)
        )?;
    }
    Ok(())
}

pub fn write_path_summary_csv<W: Write>(paths: &[PathSummary], mut out: W) -> Result<()> {
    writeln!(
        out,
        "path_id,avg_exec_price,stop_time,stop_reason,terminal_units,price_at_stop,final_price"
    )?;
    for p in paths {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            p.path_id,
            p.average_execution_price,
            p.stop_time,
            p.stop_reason.as_str(),
            p.terminal_units,
            p.price_at_stop,
            p.final_price
        )?;
    }
    Ok(())
}
