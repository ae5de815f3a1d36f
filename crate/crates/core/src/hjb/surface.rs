use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use super::{Grid, ProblemKind};
use crate::{Error, Result};

/// Solved `h` values on the `(N + 1) x (M + 1)` mesh, row-major in time.
///
/// `h / kappa` is the optimal trading speed per unit of outstanding
/// inventory.
#[derive(Debug, Clone, PartialEq)]
pub struct HSurface {
    grid: Grid,
    kind: ProblemKind,
    values: Vec<f64>,
}

/// How prices between grid columns are resolved.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Lookup {
    #[default]
    Nearest,
    /// Linear in `S` between the two neighbouring columns.
    LinearInS,
}

impl HSurface {
    pub(crate) fn from_parts(grid: Grid, kind: ProblemKind, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), (grid.n_time + 1) * (grid.n_price + 1));
        Self { grid, kind, values }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn kind(&self) -> ProblemKind {
        self.kind
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, n: usize, i: usize) -> f64 {
        self.values[n * (self.grid.n_price + 1) + i]
    }

    pub fn row(&self, n: usize) -> &[f64] {
        let width = self.grid.n_price + 1;
        &self.values[n * width..(n + 1) * width]
    }

    /// Writes the surface as CSV: the header row holds the price grid, the
    /// first column the time grid. Values use shortest round-trip scientific
    /// notation.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        write!(out, "t\\S")?;
        for s in self.grid.prices() {
            write!(out, ",{s:e}")?;
        }
        writeln!(out)?;
        for n in 0..=self.grid.n_time {
            write!(out, "{:e}", self.grid.time(n))?;
            for v in self.row(n) {
                write!(out, ",{v:e}")?;
            }
            writeln!(out)?;
        }
        out.flush()?;
        Ok(())
    }

    /// Reads a surface written by [`write_csv`](Self::write_csv) and checks
    /// its axes against `grid`.
    pub fn read_csv<R: BufRead>(input: R, grid: Grid, kind: ProblemKind) -> Result<Self> {
        let width = grid.n_price + 1;
        let mut lines = input.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Surface("empty file".into()))??;
        let prices = parse_fields(header.split(',').skip(1))?;
        if prices.len() != width {
            return Err(Error::Surface(format!(
                "expected {width} price columns, found {}",
                prices.len()
            )));
        }
        for (i, &s) in prices.iter().enumerate() {
            if (s - grid.price(i)).abs() > 1e-9 * grid.s_max.abs().max(1.0) {
                return Err(Error::Surface(format!("price axis mismatch at column {i}")));
            }
        }
        let mut values = Vec::with_capacity((grid.n_time + 1) * width);
        let mut rows = 0;
        for line in lines {
            let line = line?;
            if line.is_empty() {
                continue;
            }
            let fields = parse_fields(line.split(','))?;
            if fields.len() != width + 1 {
                return Err(Error::Surface(format!(
                    "row {rows} has {} fields",
                    fields.len()
                )));
            }
            if (fields[0] - grid.time(rows)).abs() > 1e-9 * grid.horizon.max(1.0) {
                return Err(Error::Surface(format!("time axis mismatch at row {rows}")));
            }
            values.extend_from_slice(&fields[1..]);
            rows += 1;
        }
        if rows != grid.n_time + 1 {
            return Err(Error::Surface(format!(
                "expected {} time rows, found {rows}",
                grid.n_time + 1
            )));
        }
        Ok(Self::from_parts(grid, kind, values))
    }
}

fn parse_fields<'a>(fields: impl Iterator<Item = &'a str>) -> Result<Vec<f64>> {
    fields
        .map(|f| {
            f.trim()
                .parse::<f64>()
                .map_err(|e| Error::Surface(format!("bad number {f:?}: {e}")))
        })
        .collect()
}

/// `h` at `(t, price)`: nearest time row, price clamped to the grid and
/// resolved per `mode`.
pub fn lookup_h(surface: &HSurface, t: f64, price: f64, mode: Lookup) -> f64 {
    let grid = &surface.grid;
    let n = grid.time_index(t);
    let x = ((price.clamp(grid.s_min, grid.s_max) - grid.s_min) / grid.ds)
        .clamp(0.0, grid.n_price as f64);
    match mode {
        Lookup::Nearest => surface.get(n, x.round() as usize),
        // Prices that sit on a node up to rounding return the node value exactly.
        Lookup::LinearInS if (x - x.round()).abs() < 1e-9 => surface.get(n, x.round() as usize),
        Lookup::LinearInS => {
            let lo = (x.floor() as usize).min(grid.n_price - 1);
            let w = x - lo as f64;
            (1.0 - w) * surface.get(n, lo) + w * surface.get(n, lo + 1)
        }
    }
}
