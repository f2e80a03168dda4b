//! Nonlocal spectral discretization of the killed generator plus potential.
//!
//! The grid model assembles cell-to-cell jump rates from the Dirichlet-form
//! kernel `A(n,α)|x-y|^{-(n+α)}` together with an exterior killing vector
//! computed by per-cell polar quadrature with analytic radial pieces. The
//! resulting stiffness matrix is symmetric by construction and positive
//! definite whenever the pair (D, q) is gaugeable, which makes eigensolves,
//! heat kernels and Green matrices straightforward dense linear algebra.

mod grid;
mod model;
mod stats;

pub use grid::{assemble, GridModel};
pub use model::{eigensolve, HeatKernel, SpectralModel, DENSE_EIGEN_CAP};
pub use stats::{
    gap_convergence, ground_state_envelope, harnack_ratio, iu_bound_m, iu_profile_a,
    iu_ratio_check, log_sobolev_stat, survival_decay_rate, DecayRate, EnvelopeFit, GapFit,
    IuCheck, IuBoundParams,
};
