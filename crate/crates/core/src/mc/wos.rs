//! Walk-on-spheres: exact sampling of the exit position from a domain.

use super::sample_ball_exit_radius;
use crate::error::{Error, Result};
use crate::geometry::{Domain, Point};
use crate::rng::RngStream;

const STEP_GUARD: usize = 1_000_000;

/// Record of one walk-on-spheres run.
#[derive(Debug, Clone)]
pub struct WosTrace {
    pub centers: Vec<Point>,
    pub radii: Vec<f64>,
    pub exit_position: Point,
    pub steps: usize,
}

/// Jumps from ball to inscribed ball until the exit jump lands outside `D`.
///
/// Each step uses the ball `B(y, shrink * δ(y, ∂D))` and the center-start
/// exit law (radius ratio from `sample_ball_exit_radius`, uniform angle), so
/// the terminal position is an exact draw from the exit distribution of the
/// process from `D` started at `x`. No time information is produced.
pub fn wos_exit(
    domain: &Domain,
    alpha: f64,
    x: Point,
    rng: &mut RngStream,
    shrink: f64,
) -> Result<WosTrace> {
    if !(shrink > 0.0 && shrink <= 1.0) {
        return Err(Error::InvalidArgument {
            name: "shrink",
            reason: format!("shrink must lie in (0, 1], got {shrink}"),
        });
    }
    if !domain.contains(x) {
        return Err(Error::PointOutside {
            x: x.x,
            y: x.y,
            reason: "walk-on-spheres must start inside the domain".into(),
        });
    }
    let mut centers = Vec::new();
    let mut radii = Vec::new();
    let mut y = x;
    for step in 0..STEP_GUARD {
        let delta = domain.dist_to_boundary(y);
        let r = shrink * delta;
        if !(r > 0.0) {
            // numerically on the boundary: nudge out by resampling the last
            // jump is not possible, treat as exit at y
            return Ok(WosTrace {
                centers,
                radii,
                exit_position: y,
                steps: step,
            });
        }
        centers.push(y);
        radii.push(r);
        let ratio = sample_ball_exit_radius(alpha, rng)?;
        let theta = rng.angle();
        let next = Point::new(
            y.x + r * ratio * theta.cos(),
            y.y + r * ratio * theta.sin(),
        );
        if !domain.contains(next) {
            return Ok(WosTrace {
                centers,
                radii,
                exit_position: next,
                steps: step + 1,
            });
        }
        y = next;
    }
    Err(Error::NonTermination { limit: STEP_GUARD })
}
