//! Free-space kernels, Kato-class diagnostics and kernel estimators.
//!
//! The normalizing constant of the α-stable Green function,
//! `A(n, α) = α 2^{α-1} Γ((α+n)/2) / (π^{n/2} Γ(1-α/2))`, drives everything
//! here: the free Green function `A(n,α)|x-y|^{α-n}`, the jump kernel
//! `A(n,α)|x-y|^{-(n+α)}` of the Dirichlet form, and the Poisson-kernel
//! quadratures.

mod estimators;
mod kato;
mod potential;

pub use estimators::{
    harmonic_measure, martin_estimate, mc_green, poisson_identity_residual,
    superharmonic_check, BallVerdict, ExteriorRegion, HarmonicMeasure, McGreen,
    PoissonResidual,
};
pub use kato::{kato_decompose, kato_modulus, KatoReport};
pub use potential::{GridPotential, Potential};

use statrs::function::gamma::gamma;

use crate::error::{Error, Result};

/// Normalizing constant `A(n, α)` of the free-space Green function of the
/// isotropic α-stable process.
pub fn stable_constant(n: u32, alpha: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidArgument {
            name: "n",
            reason: format!("dimension must be >= 2, got {n}"),
        });
    }
    if !(alpha > 0.0 && alpha < 2.0) {
        return Err(Error::InvalidArgument {
            name: "alpha",
            reason: format!("alpha must lie in (0, 2), got {alpha}"),
        });
    }
    let nf = n as f64;
    Ok(alpha * 2f64.powf(alpha - 1.0) * gamma((alpha + nf) / 2.0)
        / (std::f64::consts::PI.powf(nf / 2.0) * gamma(1.0 - alpha / 2.0)))
}

/// Free-space Green function `A(n, α) |x-y|^{α-n}` (requires α < n and
/// transience, which holds automatically for n >= 2).
pub fn free_green(n: u32, alpha: f64, x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != n as usize || y.len() != n as usize {
        return Err(Error::InvalidArgument {
            name: "x",
            reason: format!("points must have {n} coordinates"),
        });
    }
    let r_sq: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
    if r_sq == 0.0 {
        return Err(Error::Singularity("free Green function at x = y".into()));
    }
    let a = stable_constant(n, alpha)?;
    Ok(a * r_sq.sqrt().powf(alpha - n as f64))
}
