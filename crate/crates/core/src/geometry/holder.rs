//! Quasi-hyperbolic distance estimates and the order-0 Hölder classifier.
//!
//! The quasi-hyperbolic distance ρ_D(x0, x) is approximated by the Whitney
//! chain distance between the squares covering x0 and x (the two are
//! comparable, so the fitted constants absorb the equivalence factor). A
//! domain qualifies as Hölder of order 0 when
//! `ρ_D(x0, x) <= C1 log(1/δ(x, ∂D)) + C2` holds for all x.

use super::{whitney_decompose, Domain, Point};
use crate::error::{Error, Result};
use crate::rng::RngStream;

/// Whitney-chain estimate of the quasi-hyperbolic distance between `x0`
/// and `x`, built from a fresh decomposition at `depth` levels.
pub fn quasihyperbolic_estimate(
    domain: &Domain,
    x0: Point,
    x: Point,
    depth: u32,
) -> Result<f64> {
    let graph = whitney_decompose(domain, x0, depth)?;
    Ok(graph.chain_distance(x)? as f64)
}

/// Result of fitting the Hölder-order-0 bound over uniform samples.
#[derive(Debug, Clone)]
pub struct Holder0Fit {
    /// Slope of the bound against log(1/δ).
    pub c1: f64,
    /// Offset of the bound (raw coordinates).
    pub c2: f64,
    /// Offset after rescaling the domain so that δ(x0, ∂D) = 1; the slope is
    /// scale-invariant, the offset shifts by `-c1 * log δ(x0)`.
    pub c2_rescaled: f64,
    /// Largest positive excess of ρ over the fitted bound across samples.
    pub max_violation: f64,
    /// Samples skipped because the decomposition left them uncovered.
    pub uncovered_samples: usize,
    /// Samples actually used in the fit.
    pub used_samples: usize,
}

/// Fits `ρ(x0, x) <= C1 log(1/δ(x)) + C2` by least squares over uniform
/// samples in `D`, then lifts the offset until the bound dominates every
/// sample. `max_violation` is re-measured against the returned constants.
pub fn holder0_fit(
    domain: &Domain,
    x0: Point,
    sample_count: usize,
    depth: u32,
    rng: &mut RngStream,
) -> Result<Holder0Fit> {
    if sample_count < 100 {
        return Err(Error::InvalidArgument {
            name: "sample_count",
            reason: format!("need >= 100 samples, got {sample_count}"),
        });
    }
    let graph = whitney_decompose(domain, x0, depth)?;
    let (lo, hi) = domain.bounding_box();

    let mut rho = Vec::with_capacity(sample_count);
    let mut ell = Vec::with_capacity(sample_count);
    let mut uncovered = 0usize;
    let mut drawn = 0usize;
    let mut guard = 0usize;
    while drawn < sample_count {
        guard += 1;
        if guard > 1000 * sample_count {
            return Err(Error::NoConvergence(
                "rejection sampling failed to hit the domain".into(),
            ));
        }
        let p = Point::new(rng.uniform_range(lo.x, hi.x), rng.uniform_range(lo.y, hi.y));
        if !domain.contains(p) {
            continue;
        }
        drawn += 1;
        match graph.chain_distance(p) {
            Ok(d) => {
                rho.push(d as f64);
                ell.push((1.0 / domain.dist_to_boundary(p)).ln());
            }
            Err(_) => uncovered += 1,
        }
    }
    if rho.len() < 10 {
        return Err(Error::InsufficientData(format!(
            "only {} of {sample_count} samples covered by the decomposition",
            rho.len()
        )));
    }

    // least squares, then clamp the slope to be nonnegative and lift the
    // offset so the bound covers the worst sample
    let n = rho.len() as f64;
    let ml = ell.iter().sum::<f64>() / n;
    let mr = rho.iter().sum::<f64>() / n;
    let sxx: f64 = ell.iter().map(|l| (l - ml).powi(2)).sum();
    let sxy: f64 = ell.iter().zip(&rho).map(|(l, r)| (l - ml) * (r - mr)).sum();
    let mut c1 = if sxx > 1e-12 { sxy / sxx } else { 0.0 };
    if c1 < 0.0 {
        c1 = 0.0;
    }
    let c2 = ell
        .iter()
        .zip(&rho)
        .map(|(l, r)| r - c1 * l)
        .fold(f64::NEG_INFINITY, f64::max);
    let max_violation = ell
        .iter()
        .zip(&rho)
        .map(|(l, r)| r - (c1 * l + c2))
        .fold(f64::NEG_INFINITY, f64::max)
        .max(0.0);

    let delta0 = domain.dist_to_boundary(x0);
    Ok(Holder0Fit {
        c1,
        c2,
        c2_rescaled: c2 - c1 * delta0.ln(),
        max_violation,
        uncovered_samples: uncovered,
        used_samples: rho.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coincident_points_have_zero_estimate() {
        let d = Domain::ball(Point::new(0.0, 0.0), 1.0).unwrap();
        let x0 = Point::new(0.0, 0.0);
        assert_eq!(quasihyperbolic_estimate(&d, x0, x0, 6).unwrap(), 0.0);
    }

    #[test]
    fn log_growth_toward_ball_boundary() {
        let d = Domain::ball(Point::new(0.0, 0.0), 1.0).unwrap();
        let x0 = Point::new(0.0, 0.0);
        let graph = whitney_decompose(&d, x0, 12).unwrap();
        // estimate / log(1/δ) stays in a fixed positive bracket
        let mut ratios = Vec::new();
        for k in 3..=10 {
            let delta = 2f64.powi(-k);
            let p = Point::new(1.0 - delta, 0.0);
            let rho = graph.chain_distance(p).unwrap() as f64;
            let l = (1.0 / d.dist_to_boundary(p)).ln();
            ratios.push(rho / l);
        }
        let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = ratios.iter().cloned().fold(0.0, f64::max);
        assert!(lo > 0.0 && hi < 10.0, "bracket [{lo}, {hi}]");
    }

    #[test]
    fn ball_fit_has_zero_violation() {
        let d = Domain::ball(Point::new(0.0, 0.0), 1.0).unwrap();
        let mut rng = RngStream::new(11, 0);
        let fit = holder0_fit(&d, Point::new(0.0, 0.0), 10_000, 10, &mut rng).unwrap();
        assert!(fit.max_violation <= 1e-9, "violation {}", fit.max_violation);
        assert!(fit.c1 >= 0.0);
        assert!(fit.c2 >= 0.0, "zero-distance sample forces c2 >= 0");
    }

    #[test]
    fn box_fit_has_zero_violation() {
        let d = Domain::rect(Point::new(0.0, 0.0), Point::new(1.0, 1.0)).unwrap();
        let mut rng = RngStream::new(12, 0);
        let fit = holder0_fit(&d, Point::new(0.5, 0.5), 10_000, 10, &mut rng).unwrap();
        assert!(fit.max_violation <= 1e-9);
    }

    #[test]
    fn sample_count_validated() {
        let d = Domain::ball(Point::new(0.0, 0.0), 1.0).unwrap();
        let mut rng = RngStream::new(13, 0);
        assert!(holder0_fit(&d, Point::new(0.0, 0.0), 50, 8, &mut rng).is_err());
    }

    #[test]
    fn rescaled_offset_shifts_by_slope_times_log_delta() {
        let d = Domain::ball(Point::new(0.0, 0.0), 2.0).unwrap();
        let x0 = Point::new(0.0, 0.0); // δ(x0) = 2
        let mut rng = RngStream::new(14, 0);
        let fit = holder0_fit(&d, x0, 2000, 9, &mut rng).unwrap();
        let expected = fit.c2 - fit.c1 * 2.0f64.ln();
        assert!((fit.c2_rescaled - expected).abs() < 1e-12);
    }
}
