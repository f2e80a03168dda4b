//! Exact α-stable increments by subordination.

use crate::error::{Error, Result};
use crate::rng::RngStream;

/// One draw of the standard positive `a`-stable law, `0 < a < 1`, normalized
/// by its Laplace transform `E[exp(-λ S)] = exp(-λ^a)`.
///
/// Classical transformation method: with `U` uniform on (0, π) and `W` a
/// standard exponential,
/// `S = [sin(aU) / sin(U)^{1/a}] * [sin((1-a)U) / W]^{(1-a)/a}`.
pub fn positive_stable(a: f64, rng: &mut RngStream) -> Result<f64> {
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::InvalidArgument {
            name: "a",
            reason: format!("stability index must lie in (0, 1), got {a}"),
        });
    }
    let u = rng.uniform() * std::f64::consts::PI;
    let w = rng.exponential();
    let s1 = (a * u).sin() / u.sin().powf(1.0 / a);
    let s2 = (((1.0 - a) * u).sin() / w).powf((1.0 - a) / a);
    Ok(s1 * s2)
}

/// One increment of the isotropic α-stable process over time `t` in `dim`
/// coordinates (`dim` ∈ {1, 2}).
///
/// Subordination: draw `S` positive (α/2)-stable with
/// `E[exp(-λS)] = exp(-t λ^{α/2})` (i.e. `t^{2/α}` times the standard draw),
/// then a centered Gaussian vector with per-coordinate variance `2S`. The
/// characteristic function comes out as `exp(-t |ξ|^α)`.
pub fn sample_increment(alpha: f64, t: f64, dim: usize, rng: &mut RngStream) -> Result<Vec<f64>> {
    if !(alpha > 0.0 && alpha < 2.0) {
        return Err(Error::InvalidArgument {
            name: "alpha",
            reason: format!("alpha must lie in (0, 2), got {alpha}"),
        });
    }
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::InvalidArgument {
            name: "t",
            reason: format!("time step must be finite and positive, got {t}"),
        });
    }
    if !(dim == 1 || dim == 2) {
        return Err(Error::InvalidArgument {
            name: "dim",
            reason: format!("dimension must be 1 or 2, got {dim}"),
        });
    }
    let s = t.powf(2.0 / alpha) * positive_stable(alpha / 2.0, rng)?;
    let sigma = (2.0 * s).sqrt();
    Ok((0..dim).map(|_| sigma * rng.normal()).collect())
}
