//! Time-resolved killed paths and Feynman–Kac accumulation.

use super::sample_increment;
use crate::error::{Error, Result};
use crate::geometry::{Domain, Point};
use crate::kernels::Potential;
use crate::rng::RngStream;

/// One Euler-discretized trajectory of the killed process.
///
/// Exit is detected at step endpoints only; excursions inside a step are
/// missed, an O(dt) bias quantified by refinement studies. The Feynman–Kac
/// integral uses the left-endpoint rule over pre-exit steps, also O(dt).
#[derive(Debug, Clone)]
pub struct StablePath {
    pub alpha: f64,
    pub times: Vec<f64>,
    pub positions: Vec<Point>,
    pub exited: bool,
    pub exit_time: Option<f64>,
    pub exit_position: Option<Point>,
    pub fk_integral: f64,
}

/// Simulates from `x` with steps of size `dt` until the path leaves `D` or
/// reaches `t_max` (censored, `exited = false`).
pub fn killed_walk(
    domain: &Domain,
    alpha: f64,
    x: Point,
    dt: f64,
    q: &Potential,
    t_max: f64,
    rng: &mut RngStream,
) -> Result<StablePath> {
    if !(dt > 0.0) {
        return Err(Error::InvalidArgument {
            name: "dt",
            reason: format!("time step must be positive, got {dt}"),
        });
    }
    if !(t_max > 0.0) {
        return Err(Error::InvalidArgument {
            name: "t_max",
            reason: format!("horizon must be positive, got {t_max}"),
        });
    }
    if !domain.contains(x) {
        return Err(Error::PointOutside {
            x: x.x,
            y: x.y,
            reason: "killed walk must start inside the domain".into(),
        });
    }
    let steps = (t_max / dt).ceil() as usize;
    let mut times = Vec::with_capacity(steps.min(1 << 20) + 1);
    let mut positions = Vec::with_capacity(times.capacity());
    times.push(0.0);
    positions.push(x);
    let mut pos = x;
    let mut fk = 0.0;
    for k in 0..steps {
        let qv = q.eval(pos);
        if !qv.is_finite() {
            return Err(Error::Singularity(format!(
                "potential not evaluable at ({}, {})",
                pos.x, pos.y
            )));
        }
        fk += qv * dt;
        let inc = sample_increment(alpha, dt, 2, rng)?;
        let next = Point::new(pos.x + inc[0], pos.y + inc[1]);
        let t_next = (k + 1) as f64 * dt;
        times.push(t_next);
        positions.push(next);
        if !domain.contains(next) {
            return Ok(StablePath {
                alpha,
                times,
                positions,
                exited: true,
                exit_time: Some(t_next),
                exit_position: Some(next),
                fk_integral: fk,
            });
        }
        pos = next;
    }
    Ok(StablePath {
        alpha,
        times,
        positions,
        exited: false,
        exit_time: None,
        exit_position: None,
        fk_integral: fk,
    })
}

/// `exp(∫ q ds)` for a path that exited; censored paths are the caller's
/// responsibility and are rejected here.
pub fn feynman_kac_weight(path: &StablePath) -> Result<f64> {
    if !path.exited {
        return Err(Error::InsufficientData(
            "Feynman-Kac weight requested for a censored path (no exit)".into(),
        ));
    }
    let w = path.fk_integral.exp();
    debug_assert!(w.is_finite() && w > 0.0);
    Ok(w)
}
