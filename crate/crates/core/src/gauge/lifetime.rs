//! Conditional lifetimes and their decay limits.

use crate::error::{Error, Result};
use crate::spectral::SpectralModel;

/// Conditional expected lifetimes `E^x_h[τ_D] = (G_D h)(x) / h(x)`.
#[derive(Debug, Clone, serde::Serialize)]
pub struct LifetimeTable {
    pub per_cell: Vec<f64>,
    pub sup: f64,
    /// Cells where h vanishes (excluded from the table).
    pub excluded: usize,
}

/// Lifetime of the h-conditioned process on the q = 0 model, per cell.
pub fn conditional_lifetime(model_q0: &SpectralModel, h: &[f64]) -> Result<LifetimeTable> {
    let grid = &model_q0.grid;
    let n = grid.cell_count();
    if h.len() != n {
        return Err(Error::InvalidArgument {
            name: "h",
            reason: format!("expected {n} cell values, got {}", h.len()),
        });
    }
    if h.iter().any(|&v| v < 0.0) {
        return Err(Error::InvalidArgument {
            name: "h",
            reason: "conditioning function must be nonnegative".into(),
        });
    }
    if h.iter().all(|&v| v == 0.0) {
        return Err(Error::InvalidArgument {
            name: "h",
            reason: "conditioning function must be nontrivial".into(),
        });
    }
    let green = model_q0.green_matrix()?;
    let h2 = grid.cell_area();
    let mut per_cell = Vec::with_capacity(n);
    let mut sup = 0.0f64;
    let mut excluded = 0usize;
    for i in 0..n {
        if h[i] <= 0.0 {
            excluded += 1;
            per_cell.push(f64::NAN);
            continue;
        }
        let mut acc = 0.0;
        for j in 0..n {
            acc += green[[i, j]] * h[j];
        }
        let v = h2 * acc / h[i];
        sup = sup.max(v);
        per_cell.push(v);
    }
    Ok(LifetimeTable {
        per_cell,
        sup,
        excluded,
    })
}

/// Decay of the h-conditioned survival toward its spectral limit.
#[derive(Debug, Clone, serde::Serialize)]
pub struct DecaySeries {
    /// (t, e^{-μ0 t} (P^D_t h)(x) / h(x)).
    pub series: Vec<(f64, f64)>,
    /// φ0(x) <φ0, h> / h(x).
    pub limit: f64,
    pub final_gap: f64,
    /// Relative gap at the largest time below 1e-3.
    pub pass: bool,
}

/// Evaluates `e^{-μ0 t} (u_0(t) h)(x) / h(x)` on `t_list` against the
/// ground-state limit, at the cell holding `x`.
pub fn lifetime_decay(
    model_q0: &SpectralModel,
    h: &[f64],
    t_list: &[f64],
    x_cell: usize,
) -> Result<DecaySeries> {
    let grid = &model_q0.grid;
    let n = grid.cell_count();
    if h.len() != n || x_cell >= n {
        return Err(Error::InvalidArgument {
            name: "h",
            reason: "dimension mismatch".into(),
        });
    }
    if h[x_cell] <= 0.0 {
        return Err(Error::InvalidArgument {
            name: "x_cell",
            reason: "conditioning function vanishes at the evaluation cell".into(),
        });
    }
    if t_list.is_empty() {
        return Err(Error::InvalidArgument {
            name: "t_list",
            reason: "need at least one time".into(),
        });
    }
    let mu0 = model_q0.lambda0();
    let kmax = model_q0.eigenvalues.len();
    let masses: Vec<f64> = (0..kmax).map(|k| model_q0.mode_inner(k, h)).collect();
    let mut series = Vec::with_capacity(t_list.len());
    for &t in t_list {
        let mut acc = 0.0;
        for k in 0..kmax {
            acc += ((model_q0.eigenvalues[k] - mu0) * t).exp()
                * model_q0.eigenfunctions[[x_cell, k]]
                * masses[k];
        }
        series.push((t, acc / h[x_cell]));
    }
    let limit = model_q0.eigenfunctions[[x_cell, 0]] * masses[0] / h[x_cell];
    let last = series.last().unwrap().1;
    let final_gap = (last - limit).abs() / limit.abs().max(1e-300);
    Ok(DecaySeries {
        series,
        limit,
        final_gap,
        pass: final_gap <= 1e-3,
    })
}
