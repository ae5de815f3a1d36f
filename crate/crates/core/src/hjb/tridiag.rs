use crate::{Error, Result};

/// Solves `A x = rhs` for tridiagonal `A` by the Thomas algorithm.
///
/// `lower[0]` and `upper[n - 1]` are ignored. `scratch` must have length `n`
/// and is overwritten. Fails on a zero or non-finite pivot; for strictly
/// diagonally dominant matrices that cannot happen.
pub fn solve_tridiagonal(
    lower: &[f64],
    diag: &[f64],
    upper: &[f64],
    rhs: &[f64],
    x: &mut [f64],
    scratch: &mut [f64],
) -> Result<()> {
    let n = diag.len();
    if lower.len() != n || upper.len() != n || rhs.len() != n || x.len() != n || scratch.len() != n
    {
        return Err(Error::Solver("inconsistent band lengths".into()));
    }
    if n == 0 {
        return Ok(());
    }
    let mut pivot = diag[0];
    check_pivot(pivot, 0)?;
    scratch[0] = upper[0] / pivot;
    x[0] = rhs[0] / pivot;
    for i in 1..n {
        pivot = diag[i] - lower[i] * scratch[i - 1];
        check_pivot(pivot, i)?;
        scratch[i] = upper[i] / pivot;
        x[i] = (rhs[i] - lower[i] * x[i - 1]) / pivot;
    }
    for i in (0..n - 1).rev() {
        x[i] -= scratch[i] * x[i + 1];
    }
    Ok(())
}

fn check_pivot(pivot: f64, row: usize) -> Result<()> {
    if pivot == 0.0 || !pivot.is_finite() {
        Err(Error::Solver(format!("pivot {pivot} at row {row}")))
    } else {
        Ok(())
    }
}
