//! Gauge and conditional-gauge diagnostics.
//!
//! The gauge of a pair (D, q) is `g(x) = E^x[e_q(τ_D)]`; it is bounded
//! exactly when the top eigenvalue of `L^D + q` is negative, and in that
//! regime the Green matrix `V_q` of the perturbed generator exists and
//! carries all conditional gauges: interior values are the kernel ratios
//! `V_q/G_D`, exterior and boundary values follow by weighting with the
//! Poisson and Martin kernels. Every quantity here is computed by at least
//! two routes when an independent one is available.

mod conditional;
mod function;
mod lifetime;
mod scans;

pub use conditional::{
    cond_gauge_boundary, cond_gauge_exterior, cond_gauge_interior, BoundaryGauge,
    ConditionalGaugeTable, TableKind,
};
pub use function::{gauge_function, gaugeability, GaugeReport, Gaugeability, McBudget, ProbeEstimate};
pub use lifetime::{conditional_lifetime, lifetime_decay, DecaySeries, LifetimeTable};
pub use scans::{
    eigen_comparison, smallness_bound_check, three_g_scan, uniform_integrability_diag,
    EigenComparison, SmallnessVerdict, ThreeGScan,
};

use crate::error::{Error, Result};
use crate::spectral::SpectralModel;

/// Pair separation floor for all kernel-ratio computations: nearer pairs are
/// excluded rather than regularized.
pub const SEPARATION_CELLS: f64 = 2.0;

pub(crate) fn check_same_grid(a: &SpectralModel, b: &SpectralModel) -> Result<()> {
    if a.grid.cell_count() != b.grid.cell_count()
        || a.grid.h != b.grid.h
        || a.grid.alpha != b.grid.alpha
    {
        return Err(Error::InvalidArgument {
            name: "models",
            reason: "spectral models live on different grids".into(),
        });
    }
    Ok(())
}

pub(crate) fn well_separated(a: crate::geometry::Point, b: crate::geometry::Point, h: f64) -> bool {
    a.dist(b) > SEPARATION_CELLS * h
}
