//! Kernel-ratio scans: the triple Green bound, perturbation smallness,
//! eigenfunction comparability and the uniform-integrability diagnostic.

use ndarray::Array2;
use super::{check_same_grid, well_separated};
use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::spectral::{GridModel, SpectralModel};

/// Empirical scan of the triple Green-function bound.
#[derive(Debug, Clone, serde::Serialize)]
pub struct ThreeGScan {
    /// Largest normalized triple ratio found.
    pub sup: f64,
    /// Log-spaced histogram of the ratios: (bin upper edge, count).
    pub histogram: Vec<(f64, usize)>,
    pub triples: usize,
    pub resampled: usize,
}

/// Samples well-separated cell triples (x, y, w) and records
/// `[G(x,y) G(y,w) / G(x,w)] * |x-y|^{n-α} |y-w|^{n-α} / |x-w|^{n-α}`.
pub fn three_g_scan(
    grid: &GridModel,
    green: &Array2<f64>,
    triples: usize,
    rng: &mut RngStream,
) -> Result<ThreeGScan> {
    let n = grid.cell_count();
    let expo = 2.0 - grid.alpha;
    let mut sup = 0.0f64;
    let mut ratios = Vec::with_capacity(triples);
    let mut resampled = 0usize;
    let budget = triples * 10;
    let mut attempts = 0usize;
    while ratios.len() < triples {
        attempts += 1;
        if attempts > budget {
            return Err(Error::NoConvergence(format!(
                "separation rejections exhausted the triple budget ({budget})"
            )));
        }
        let i = (rng.next_u64() % n as u64) as usize;
        let j = (rng.next_u64() % n as u64) as usize;
        let k = (rng.next_u64() % n as u64) as usize;
        let (xi, xj, xk) = (grid.cells[i], grid.cells[j], grid.cells[k]);
        if !well_separated(xi, xj, grid.h)
            || !well_separated(xj, xk, grid.h)
            || !well_separated(xi, xk, grid.h)
        {
            resampled += 1;
            continue;
        }
        let value = green[[i, j]] * green[[j, k] ] / green[[i, k]]
            * xi.dist(xj).powf(expo) * xj.dist(xk).powf(expo)
            / xi.dist(xk).powf(expo);
        sup = sup.max(value);
        ratios.push(value);
    }
    // log-spaced histogram over [min, sup]
    let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min).max(1e-300);
    let bins = 16;
    let mut histogram: Vec<(f64, usize)> = (1..=bins)
        .map(|b| (lo * (sup / lo).powf(b as f64 / bins as f64), 0))
        .collect();
    for &v in &ratios {
        let idx = histogram
            .iter()
            .position(|&(edge, _)| v <= edge * (1.0 + 1e-12))
            .unwrap_or(bins - 1);
        histogram[idx].1 += 1;
    }
    Ok(ThreeGScan {
        sup,
        histogram,
        triples,
        resampled,
    })
}

/// Verdict of the perturbation-smallness bound.
#[derive(Debug, Clone, serde::Serialize)]
pub struct SmallnessVerdict {
    /// `sup_{x,y} ∫ G|q2|G / G` over well-separated pairs.
    pub precondition_sup: f64,
    /// Precondition `<= 1/2` holds; the bound is only asserted then.
    pub precondition_ok: bool,
    /// Entrywise violations of `e^{-1/2} G <= V_{q2} <= 2 G` (None when the
    /// precondition failed and the theorem is not in force).
    pub violations: Option<usize>,
    pub pairs: usize,
}

/// Checks `e^{-1/2} G_D <= V_{q2} <= 2 G_D` under the smallness
/// precondition on the 3G-weighted norm of q2.
pub fn smallness_bound_check(
    model_q2: &SpectralModel,
    model_q0: &SpectralModel,
) -> Result<SmallnessVerdict> {
    check_same_grid(model_q2, model_q0)?;
    let g = model_q0.green_matrix()?;
    let grid = &model_q2.grid;
    let n = grid.cell_count();
    let h2 = grid.cell_area();

    // W = G diag(|q2|) G h²
    let mut gq = g.clone();
    for (j, mut col) in gq.columns_mut().into_iter().enumerate() {
        col.mapv_inplace(|x| x * model_q2.grid.potential[j].abs());
    }
    let w = gq.dot(&g);
    let mut sup = 0.0f64;
    let mut pairs = 0usize;
    for i in 0..n {
        for j in 0..n {
            if i != j && well_separated(grid.cells[i], grid.cells[j], grid.h) {
                sup = sup.max(h2 * w[[i, j]] / g[[i, j]]);
                pairs += 1;
            }
        }
    }
    let precondition_ok = sup <= 0.5;
    if !precondition_ok {
        return Ok(SmallnessVerdict {
            precondition_sup: sup,
            precondition_ok,
            violations: None,
            pairs,
        });
    }
    let v = model_q2.green_matrix()?;
    let lo = (-0.5f64).exp();
    let mut violations = 0usize;
    for i in 0..n {
        for j in 0..n {
            if i != j && well_separated(grid.cells[i], grid.cells[j], grid.h) {
                let ratio = v[[i, j]] / g[[i, j]];
                if !(lo..=2.0).contains(&ratio) {
                    violations += 1;
                }
            }
        }
    }
    Ok(SmallnessVerdict {
        precondition_sup: sup,
        precondition_ok,
        violations: Some(violations),
        pairs,
    })
}

/// Two-sided comparability constants between the perturbed and free models.
#[derive(Debug, Clone, serde::Serialize)]
pub struct EigenComparison {
    /// `max_x max(φ0/ψ0, ψ0/φ0)` after L² normalization.
    pub c_eig: f64,
    /// Per time: two-sided constant for `u_q(t) / p^D(t)` over cells where
    /// both kernels are positive.
    pub c_kernel: Vec<(f64, f64)>,
}

/// Compares ground states and heat kernels of the q and q = 0 models.
pub fn eigen_comparison(
    model_q: &SpectralModel,
    model_q0: &SpectralModel,
    t_list: &[f64],
) -> Result<EigenComparison> {
    check_same_grid(model_q, model_q0)?;
    let psi0 = model_q.ground_state();
    let phi0 = model_q0.ground_state();
    let mut c_eig = 0.0f64;
    for (a, b) in psi0.iter().zip(phi0.iter()) {
        if *a <= 0.0 || *b <= 0.0 {
            return Err(Error::NoConvergence(
                "ground state lost positivity".into(),
            ));
        }
        c_eig = c_eig.max(a / b).max(b / a);
    }
    let mut c_kernel = Vec::with_capacity(t_list.len());
    for &t in t_list {
        let uq = model_q.heat_kernel(t)?;
        let p0 = model_q0.heat_kernel(t)?;
        let n = model_q.grid.cell_count();
        let mut c = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let (a, b) = (uq.values[[i, j]], p0.values[[i, j]]);
                if a > 0.0 && b > 0.0 {
                    c = c.max(a / b).max(b / a);
                }
            }
        }
        c_kernel.push((t, c));
    }
    Ok(EigenComparison { c_eig, c_kernel })
}

/// Uniform-integrability surrogate: for each threshold m, the sup over a
/// deterministic spread of well-separated pairs of the integrand mass
/// carried by cells where the integrand exceeds m. The curve must fall to
/// zero as m grows for Kato potentials.
pub fn uniform_integrability_diag(
    grid: &GridModel,
    green: &Array2<f64>,
    q_values: &[f64],
    thresholds: &[f64],
) -> Vec<(f64, f64)> {
    let n = grid.cell_count();
    let h2 = grid.cell_area();
    let stride = (n / 48).max(1);
    let mut out: Vec<(f64, f64)> = thresholds.iter().map(|&m| (m, 0.0f64)).collect();
    for i in (0..n).step_by(stride) {
        for j in (0..n).step_by(stride) {
            if i == j || !well_separated(grid.cells[i], grid.cells[j], grid.h) {
                continue;
            }
            // integrand over the middle cell z
            let denom = green[[i, j]];
            for (mi, &m) in thresholds.iter().enumerate() {
                let mut acc = 0.0;
                for z in 0..n {
                    let v = green[[i, z]] * q_values[z].abs() * green[[z, j]] / denom;
                    if v > m {
                        acc += v;
                    }
                }
                let mass = h2 * acc;
                if mass > out[mi].1 {
                    out[mi].1 = mass;
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Domain, Point};
    use crate::kernels::{kato_decompose, Potential};
    use crate::spectral::{assemble, eigensolve};

    fn ball_grid(n: usize) -> GridModel {
        let d = Domain::ball(Point::new(0.0, 0.0), 1.0).unwrap();
        assemble(&d, 2.0 / n as f64, 1.0, &Potential::zero()).unwrap()
    }

    #[test]
    fn three_g_scan_finite_and_stable() {
        let g16 = ball_grid(16);
        let m16 = eigensolve(g16, 2).unwrap();
        let green16 = m16.green_matrix().unwrap();
        let mut rng = RngStream::new(90, 0);
        let scan16 = three_g_scan(&m16.grid, &green16, 4000, &mut rng).unwrap();
        assert!(scan16.sup.is_finite() && scan16.sup > 0.0);

        let g24 = ball_grid(24);
        let m24 = eigensolve(g24, 2).unwrap();
        let green24 = m24.green_matrix().unwrap();
        let mut rng = RngStream::new(91, 0);
        let scan24 = three_g_scan(&m24.grid, &green24, 4000, &mut rng).unwrap();
        let rel = (scan16.sup - scan24.sup).abs() / scan24.sup;
        assert!(rel < 0.5, "sup across grids: {} vs {}", scan16.sup, scan24.sup);
    }

    #[test]
    fn collinear_triple_recorded() {
        let g = ball_grid(16);
        let m = eigensolve(g, 2).unwrap();
        let green = m.green_matrix().unwrap();
        let grid = &m.grid;
        let i = grid.nearest_cell(Point::new(-0.5, 0.0)).unwrap();
        let j = grid.nearest_cell(Point::new(0.0, 0.0)).unwrap();
        let k = grid.nearest_cell(Point::new(0.5, 0.0)).unwrap();
        let expo = 2.0 - grid.alpha;
        let v = green[[i, j]] * green[[j, k]] / green[[i, k]]
            * grid.cells[i].dist(grid.cells[j]).powf(expo)
            * grid.cells[j].dist(grid.cells[k]).powf(expo)
            / grid.cells[i].dist(grid.cells[k]).powf(expo);
        assert!(v.is_finite() && v > 0.0);
    }

    #[test]
    fn no_blowup_as_pair_approaches_separation_floor() {
        // y -> x: the singular factors of the ratio cancel; scan values stay
        // bounded down to the 2h separation floor
        let g = ball_grid(20);
        let m = eigensolve(g, 2).unwrap();
        let green = m.green_matrix().unwrap();
        let grid = &m.grid;
        let expo = 2.0 - grid.alpha;
        let i = grid.nearest_cell(Point::new(-0.4, 0.0)).unwrap();
        let k = grid.nearest_cell(Point::new(0.5, 0.0)).unwrap();
        let mut values = Vec::new();
        for step in 1..6 {
            let y = Point::new(-0.4 + step as f64 * 3.0 * grid.h, 0.0);
            let j = grid.nearest_cell(y).unwrap();
            if j == i || j == k {
                continue;
            }
            let v = green[[i, j]] * green[[j, k]] / green[[i, k]]
                * grid.cells[i].dist(grid.cells[j]).powf(expo)
                * grid.cells[j].dist(grid.cells[k]).powf(expo)
                / grid.cells[i].dist(grid.cells[k]).powf(expo);
            values.push(v);
        }
        let max = values.iter().cloned().fold(0.0, f64::max);
        assert!(max < 50.0, "triple ratio blow-up near the floor: {values:?}");
    }

    #[test]
    fn smallness_bound_holds_for_decomposed_tail() {
        let grid = ball_grid(16);
        let q = Potential::radial_power(Point::new(0.0, 0.0), 0.5, 0.9).unwrap();
        let (_, q2) = kato_decompose(&q, 0.3, &grid).unwrap();
        let gq2 = grid.with_potential(&q2).unwrap();
        let m0 = eigensolve(grid, 2).unwrap();
        let mq2 = eigensolve(gq2, 2).unwrap();
        let verdict = smallness_bound_check(&mq2, &m0).unwrap();
        assert!(verdict.precondition_ok, "sup {}", verdict.precondition_sup);
        assert_eq!(verdict.violations, Some(0));
    }

    #[test]
    fn smallness_gate_rejects_oversized_potential() {
        let grid = ball_grid(16);
        let q = Potential::radial_power(Point::new(0.0, 0.0), 0.5, 0.9)
            .unwrap()
            .scaled(10.0);
        let gq = grid.with_potential(&q).unwrap();
        let m0 = eigensolve(grid, 2).unwrap();
        let mq = eigensolve(gq, 2).unwrap();
        let verdict = smallness_bound_check(&mq, &m0).unwrap();
        assert!(!verdict.precondition_ok);
        assert!(verdict.violations.is_none(), "theorem must not be asserted");
    }

    #[test]
    fn zero_vs_zero_comparison_is_unity() {
        let grid = ball_grid(12);
        let m0 = eigensolve(grid, 4).unwrap();
        let cmp = eigen_comparison(&m0, &m0, &[0.5, 1.0]).unwrap();
        assert!((cmp.c_eig - 1.0).abs() < 1e-12);
        for &(_, c) in &cmp.c_kernel {
            assert!((c - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn constant_shift_keeps_eigenfunctions() {
        let grid = ball_grid(12);
        let gq = grid.with_potential(&Potential::constant(-0.3)).unwrap();
        let m0 = eigensolve(grid, 4).unwrap();
        let mq = eigensolve(gq, 4).unwrap();
        let cmp = eigen_comparison(&mq, &m0, &[]).unwrap();
        assert!((cmp.c_eig - 1.0).abs() < 1e-8, "c_eig {}", cmp.c_eig);
    }

    #[test]
    fn uniform_integrability_curve_decays_for_kato_potential() {
        let grid = ball_grid(16);
        let q = Potential::radial_power(Point::new(0.0, 0.0), 0.5, 0.9).unwrap();
        let qv = grid.sample_potential(&q);
        let m0 = eigensolve(grid.clone(), 2).unwrap();
        let green = m0.green_matrix().unwrap();
        let thresholds = [0.0, 1.0, 10.0, 100.0, 1000.0, 1e5];
        let curve = uniform_integrability_diag(&grid, &green, &qv, &thresholds);
        for w in curve.windows(2) {
            assert!(w[1].1 <= w[0].1 + 1e-12, "curve must be nonincreasing");
        }
        let last = curve.last().unwrap().1;
        let first = curve.first().unwrap().1;
        assert!(last < 0.2 * first, "tail mass did not decay: {curve:?}");
    }

    #[test]
    fn bounded_potential_curve_hits_zero() {
        let grid = ball_grid(12);
        let qv = vec![2.0; grid.cell_count()];
        let m0 = eigensolve(grid.clone(), 2).unwrap();
        let green = m0.green_matrix().unwrap();
        // integrand bounded on the sampled pairs: above its max the curve is 0
        let curve = uniform_integrability_diag(&grid, &green, &qv, &[1e9]);
        assert_eq!(curve[0].1, 0.0);
    }
}
