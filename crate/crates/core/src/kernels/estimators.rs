//! Monte Carlo estimators for the domain kernels and the Poisson-identity
//! cross-check.

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::geometry::{Domain, Point};
use crate::kernels::{stable_constant, Potential};
use crate::mc::{killed_walk, sample_ball_exit_radius, wos_exit};
use crate::par_chunk_map;
use crate::rng::RngStream;
use crate::spectral::GridModel;

/// Measurable region of the exterior `D^c`.
#[derive(Debug, Clone)]
pub enum ExteriorRegion {
    /// The whole complement.
    All,
    /// Points with `r_lo < |z - center| <= r_hi`, intersected with `D^c`.
    Annulus { center: Point, r_lo: f64, r_hi: f64 },
}

impl ExteriorRegion {
    pub fn contains(&self, domain: &Domain, z: Point) -> bool {
        if domain.contains(z) {
            return false;
        }
        match self {
            ExteriorRegion::All => true,
            ExteriorRegion::Annulus { center, r_lo, r_hi } => {
                let r = z.dist(*center);
                r > *r_lo && r <= *r_hi
            }
        }
    }
}

/// Occupation-time estimate of a Green-function row.
#[derive(Debug, Clone)]
pub struct McGreen {
    /// Cell-averaged `G_D(x, ·)` estimates (density normalization).
    pub values: Vec<f64>,
    pub std_err: Vec<f64>,
    pub paths: usize,
    /// Fraction of paths still alive at the horizon (their occupation is
    /// truncated, an O(e^{μ0 t_max}) bias).
    pub censored_fraction: f64,
}

/// Estimates `G_D(x, ·)` by averaging the time spent per cell over killed
/// walks: each pre-exit step contributes `dt` to the cell under its left
/// endpoint.
pub fn mc_green(
    domain: &Domain,
    alpha: f64,
    x: Point,
    grid: &GridModel,
    paths: usize,
    dt: f64,
    t_max: f64,
    rng: &RngStream,
) -> Result<McGreen> {
    let n = grid.cell_count();
    let q = Potential::zero();
    let chunks = 64;
    struct Partial {
        sum: Vec<f64>,
        sum_sq: Vec<f64>,
        censored: usize,
    }
    let partials: Vec<Result<Partial>> = par_chunk_map(paths, chunks, |range| {
        let mut sum = vec![0.0f64; n];
        let mut sum_sq = vec![0.0f64; n];
        let mut censored = 0usize;
        let mut occ: Vec<f64> = vec![0.0; n];
        let mut touched: Vec<usize> = Vec::new();
        for p in range {
            let mut r = rng.derive(0x4d43_4752, p as u64);
            let path = killed_walk(domain, alpha, x, dt, &q, t_max, &mut r)?;
            if !path.exited {
                censored += 1;
            }
            let last = path.positions.len() - 1;
            for pos in &path.positions[..last] {
                if let Some(cell) = grid.position_cell(*pos) {
                    if occ[cell] == 0.0 {
                        touched.push(cell);
                    }
                    occ[cell] += dt;
                }
            }
            for &cell in &touched {
                sum[cell] += occ[cell];
                sum_sq[cell] += occ[cell] * occ[cell];
                occ[cell] = 0.0;
            }
            touched.clear();
        }
        Ok(Partial {
            sum,
            sum_sq,
            censored,
        })
    });
    let mut sum = vec![0.0f64; n];
    let mut sum_sq = vec![0.0f64; n];
    let mut censored = 0usize;
    for p in partials {
        let p = p?;
        for i in 0..n {
            sum[i] += p.sum[i];
            sum_sq[i] += p.sum_sq[i];
        }
        censored += p.censored;
    }
    let h2 = grid.cell_area();
    let np = paths as f64;
    let mut values = Vec::with_capacity(n);
    let mut std_err = Vec::with_capacity(n);
    for i in 0..n {
        let mean = sum[i] / np;
        let var = (sum_sq[i] / np - mean * mean).max(0.0);
        values.push(mean / h2);
        std_err.push((var / np).sqrt() / h2);
    }
    Ok(McGreen {
        values,
        std_err,
        paths,
        censored_fraction: censored as f64 / np,
    })
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct HarmonicMeasure {
    pub probability: f64,
    pub std_err: f64,
    pub paths: usize,
}

/// Fraction of walk-on-spheres exits landing in `target` (exact in space up
/// to Monte Carlo error).
pub fn harmonic_measure(
    domain: &Domain,
    alpha: f64,
    x: Point,
    target: &ExteriorRegion,
    paths: usize,
    shrink: f64,
    rng: &RngStream,
) -> Result<HarmonicMeasure> {
    let chunks = 64;
    let partials: Vec<Result<usize>> = par_chunk_map(paths, chunks, |range| {
        let mut hits = 0usize;
        for p in range {
            let mut r = rng.derive(0x484d_4541, p as u64);
            let tr = wos_exit(domain, alpha, x, &mut r, shrink)?;
            if target.contains(domain, tr.exit_position) {
                hits += 1;
            }
        }
        Ok(hits)
    });
    let mut hits = 0usize;
    for p in partials {
        hits += p?;
    }
    let prob = hits as f64 / paths as f64;
    Ok(HarmonicMeasure {
        probability: prob,
        std_err: (prob * (1.0 - prob) / paths as f64).sqrt(),
        paths,
    })
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct PoissonResidual {
    /// Kernel route: `∫_target A(n,α) ∫_D G_D(x,y) |y-z|^{-(n+α)} dy dz`.
    pub lhs: f64,
    /// Sampling route: harmonic measure of the target.
    pub rhs: f64,
    pub rhs_std_err: f64,
    pub residual: f64,
}

/// Compares the Green-to-Poisson kernel identity against the sampled
/// harmonic measure. `green` must be the q = 0 Green matrix on `grid`.
pub fn poisson_identity_residual(
    domain: &Domain,
    alpha: f64,
    x: Point,
    target: &ExteriorRegion,
    grid: &GridModel,
    green: &Array2<f64>,
    mc_paths: usize,
    rng: &RngStream,
) -> Result<PoissonResidual> {
    let ExteriorRegion::Annulus { center, r_lo, r_hi } = target else {
        return Err(Error::InvalidArgument {
            name: "target",
            reason: "kernel quadrature needs an annulus target".into(),
        });
    };
    // the target must keep one cell width of clearance from ∂D
    let far = farthest_domain_distance(domain, *center);
    if *r_lo < far + grid.h {
        return Err(Error::InvalidArgument {
            name: "target",
            reason: format!(
                "annulus inner radius {r_lo} is within one cell of the domain (needs >= {})",
                far + grid.h
            ),
        });
    }
    if domain.dist_to_boundary(x) < 2.0 * grid.h {
        return Err(Error::PointOutside {
            x: x.x,
            y: x.y,
            reason: "source within two cells of the boundary: kernel row unreliable".into(),
        });
    }
    let ix = grid.nearest_cell(x).ok_or_else(|| Error::InsufficientData(
        "source point not covered by the grid".into(),
    ))?;

    let a_const = stable_constant(2, alpha)?;
    let weight = |y: Point| -> f64 { annulus_kernel_integral(y, *center, *r_lo, *r_hi, alpha) };
    let h2 = grid.cell_area();
    let lhs: f64 = grid
        .cells
        .iter()
        .enumerate()
        .map(|(j, &y)| green[[ix, j]] * weight(y))
        .sum::<f64>()
        * a_const
        * h2;

    let hm = harmonic_measure(domain, alpha, x, target, mc_paths, 1.0, rng)?;
    let residual = (lhs - hm.probability).abs() / hm.probability;
    Ok(PoissonResidual {
        lhs,
        rhs: hm.probability,
        rhs_std_err: hm.std_err,
        residual,
    })
}

fn farthest_domain_distance(domain: &Domain, from: Point) -> f64 {
    match domain {
        Domain::Ball { center, radius } => from.dist(*center) + radius,
        Domain::Rect { lo, hi } => [
            Point::new(lo.x, lo.y),
            Point::new(hi.x, lo.y),
            Point::new(hi.x, hi.y),
            Point::new(lo.x, hi.y),
        ]
        .iter()
        .map(|c| c.dist(from))
        .fold(0.0, f64::max),
        Domain::Polygon { vertices } => vertices
            .iter()
            .map(|v| v.dist(from))
            .fold(0.0, f64::max),
    }
}

/// `∫_{r_lo < |z - center| <= r_hi} |y - z|^{-(2+α)} dz` by polar quadrature
/// around `center`; an infinite outer radius is capped and closed with the
/// second-order tail expansion `2π [R^{-α}/α + s² d² R^{-(2+α)}/(2+α)]`,
/// `s = (2+α)/2`, `d = |y - center|`.
fn annulus_kernel_integral(y: Point, center: Point, r_lo: f64, r_hi: f64, alpha: f64) -> f64 {
    let d = y.dist(center);
    let cap = if r_hi.is_finite() {
        r_hi
    } else {
        (4.0 * r_lo).max(16.0 * d.max(1e-12))
    };
    let nr = 48;
    let na = 128;
    let mut acc = 0.0;
    for i in 0..nr {
        // Chebyshev-like clustering toward the inner edge where the kernel
        // varies fastest
        let u0 = i as f64 / nr as f64;
        let u1 = (i + 1) as f64 / nr as f64;
        let map = |u: f64| r_lo + (cap - r_lo) * u * u;
        let (a, b) = (map(u0), map(u1));
        let rho = 0.5 * (a + b);
        let w = b - a;
        let mut ring = 0.0;
        for j in 0..na {
            let theta = 2.0 * std::f64::consts::PI * (j as f64 + 0.5) / na as f64;
            let z = Point::new(center.x + rho * theta.cos(), center.y + rho * theta.sin());
            ring += y.dist(z).powf(-(2.0 + alpha));
        }
        acc += ring * rho * w * 2.0 * std::f64::consts::PI / na as f64;
    }
    if !r_hi.is_finite() {
        let s = 0.5 * (2.0 + alpha);
        acc += 2.0 * std::f64::consts::PI
            * (cap.powf(-alpha) / alpha + s * s * d * d * cap.powf(-(2.0 + alpha)) / (2.0 + alpha));
    }
    acc
}

/// Green-ratio sequence along an approach to a boundary point:
/// `G_D(x, y_k) / G_D(x0, y_k)` by nearest-cell evaluation.
pub fn martin_estimate(
    grid: &GridModel,
    green: &Array2<f64>,
    x: Point,
    x0: Point,
    approach: &[Point],
) -> Result<Vec<f64>> {
    let ix = grid
        .nearest_cell(x)
        .ok_or_else(|| Error::InsufficientData("x not covered by the grid".into()))?;
    let ix0 = grid
        .nearest_cell(x0)
        .ok_or_else(|| Error::InsufficientData("x0 not covered by the grid".into()))?;
    let mut out = Vec::with_capacity(approach.len());
    for &y in approach {
        if y.dist(x) <= grid.h || y.dist(x0) <= grid.h {
            return Err(Error::Singularity(format!(
                "approach point ({}, {}) within one cell of a source",
                y.x, y.y
            )));
        }
        let iy = grid
            .nearest_cell(y)
            .ok_or_else(|| Error::InsufficientData("approach point off the grid".into()))?;
        out.push(green[[ix, iy]] / green[[ix0, iy]]);
    }
    Ok(out)
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct BallVerdict {
    pub center: Point,
    pub radius: f64,
    pub f_at_center: f64,
    pub estimate: f64,
    pub std_err: f64,
    /// `f(x) >= estimate - 3σ`.
    pub pass: bool,
}

/// Tests the mean-value inequality of superharmonic functions on test
/// balls: one exact ball-exit step estimates
/// `E_x[f(X_{τ_B}); τ_B < τ_D]`, and `f(x)` must dominate it up to noise.
pub fn superharmonic_check(
    domain: &Domain,
    alpha: f64,
    f: &Potential,
    test_balls: &[(Point, f64)],
    paths: usize,
    rng: &RngStream,
) -> Result<Vec<BallVerdict>> {
    let mut out = Vec::with_capacity(test_balls.len());
    for (bi, &(c, r)) in test_balls.iter().enumerate() {
        if domain.dist_to_boundary(c) <= r || !domain.contains(c) {
            return Err(Error::InvalidArgument {
                name: "test_balls",
                reason: format!("ball at ({}, {}) radius {r} not compactly inside D", c.x, c.y),
            });
        }
        let chunks = 32;
        let partials: Vec<Result<(f64, f64)>> = par_chunk_map(paths, chunks, |range| {
            let mut s = 0.0;
            let mut s2 = 0.0;
            for p in range {
                let mut rs = rng.derive(0x5348_4950 + bi as u64, p as u64);
                let ratio = sample_ball_exit_radius(alpha, &mut rs)?;
                let theta = rs.angle();
                let z = Point::new(
                    c.x + r * ratio * theta.cos(),
                    c.y + r * ratio * theta.sin(),
                );
                if domain.contains(z) {
                    let v = f.eval(z);
                    s += v;
                    s2 += v * v;
                }
            }
            Ok((s, s2))
        });
        let mut s = 0.0;
        let mut s2 = 0.0;
        for p in partials {
            let (a, b) = p?;
            s += a;
            s2 += b;
        }
        let np = paths as f64;
        let mean = s / np;
        let var = (s2 / np - mean * mean).max(0.0);
        let sigma = (var / np).sqrt();
        let fx = f.eval(c);
        out.push(BallVerdict {
            center: c,
            radius: r,
            f_at_center: fx,
            estimate: mean,
            std_err: sigma,
            pass: fx >= mean - 3.0 * sigma,
        });
    }
    Ok(out)
}
