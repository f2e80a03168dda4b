//! Conditional gauges: interior (Green-conditioned), exterior
//! (Poisson-conditioned) and boundary (Martin-conditioned).

use super::{check_same_grid, well_separated};
use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::kernels::stable_constant;
use crate::spectral::SpectralModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TableKind {
    Interior,
    Exterior,
    Boundary,
}

/// Table of conditional-gauge values over a pair family.
#[derive(Debug, Clone, serde::Serialize)]
pub struct ConditionalGaugeTable {
    pub kind: TableKind,
    pub sup: f64,
    pub inf: f64,
    /// Largest relative gap between the two computation routes.
    pub route_disagreement: f64,
    pub pairs: usize,
    /// Route-A values (sampled rows for reporting when the table is large).
    pub values: Vec<f64>,
}

/// Interior conditional gauge `E^x_y[e_q(ζ)]` over well-separated cell
/// pairs.
///
/// Route A is the kernel ratio `V_q(x,y)/G_D(x,y)`; route B the
/// first-passage expansion `1 + G_D(x,y)^{-1} ∫ V_q(x,w) q(w) G_D(w,y) dw`.
/// Both are exact matrix identities in the discretization, so their
/// disagreement measures solver roundoff only.
pub fn cond_gauge_interior(
    model_q: &SpectralModel,
    model_q0: &SpectralModel,
) -> Result<ConditionalGaugeTable> {
    check_same_grid(model_q, model_q0)?;
    let v = model_q.green_matrix()?;
    let g = model_q0.green_matrix()?;
    let grid = &model_q.grid;
    let n = grid.cell_count();
    let h2 = grid.cell_area();

    // route B: 1 + (V diag(q) G) h² / G, entrywise off-diagonal
    let mut vq = v.clone();
    for (j, mut col) in vq.columns_mut().into_iter().enumerate() {
        col.mapv_inplace(|x| x * model_q.grid.potential[j]);
    }
    let correction = vq.dot(&g);

    let mut sup = f64::NEG_INFINITY;
    let mut inf = f64::INFINITY;
    let mut disagreement = 0.0f64;
    let mut values = Vec::new();
    let mut pairs = 0usize;
    for i in 0..n {
        for j in 0..n {
            if i == j || !well_separated(grid.cells[i], grid.cells[j], grid.h) {
                continue;
            }
            let a = v[[i, j]] / g[[i, j]];
            let b = 1.0 + h2 * correction[[i, j]] / g[[i, j]];
            sup = sup.max(a);
            inf = inf.min(a);
            disagreement = disagreement.max((a - b).abs() / a.abs().max(1e-300));
            pairs += 1;
            if values.len() < 4096 {
                values.push(a);
            }
        }
    }
    if pairs == 0 {
        return Err(Error::InsufficientData(
            "no well-separated cell pairs on this grid".into(),
        ));
    }
    Ok(ConditionalGaugeTable {
        kind: TableKind::Interior,
        sup,
        inf,
        route_disagreement: disagreement,
        pairs,
        values,
    })
}

/// Exterior conditional gauge `E^x_w[e_q(τ_D)]` for pairs of an interior
/// point and an exterior point at distance >= 2h from the closure.
///
/// Route A weights `V_q q` against the Poisson-kernel column built from the
/// Green matrix; route B averages interior conditional gauges against the
/// exit-kernel density.
pub fn cond_gauge_exterior(
    model_q: &SpectralModel,
    model_q0: &SpectralModel,
    pairs: &[(Point, Point)],
) -> Result<ConditionalGaugeTable> {
    check_same_grid(model_q, model_q0)?;
    let v = model_q.green_matrix()?;
    let g = model_q0.green_matrix()?;
    let grid = &model_q.grid;
    let n = grid.cell_count();
    let h2 = grid.cell_area();
    let a_const = stable_constant(2, grid.alpha)?;

    let mut sup = f64::NEG_INFINITY;
    let mut inf = f64::INFINITY;
    let mut disagreement = 0.0f64;
    let mut values = Vec::with_capacity(pairs.len());
    for &(x, w) in pairs {
        if grid.domain.contains(w) || grid.domain.dist_to_boundary(w) < 2.0 * grid.h {
            return Err(Error::PointOutside {
                x: w.x,
                y: w.y,
                reason: "exterior point must clear the closure by two cells".into(),
            });
        }
        let ix = grid
            .nearest_cell(x)
            .ok_or_else(|| Error::InsufficientData("interior point off the grid".into()))?;
        // Poisson column K(·, w) from the Green matrix
        let jump: Vec<f64> = grid
            .cells
            .iter()
            .map(|&y| y.dist(w).powf(-(2.0 + grid.alpha)))
            .collect();
        let mut k_col = vec![0.0f64; n];
        for i in 0..n {
            let mut acc = 0.0;
            for j in 0..n {
                acc += g[[i, j]] * jump[j];
            }
            k_col[i] = a_const * h2 * acc;
        }
        // route A: 1 + K(x,w)^{-1} Σ_u V(x,u) q(u) K(u,w) h²
        let mut acc_a = 0.0;
        for u in 0..n {
            acc_a += v[[ix, u]] * grid.potential[u] * k_col[u];
        }
        let value_a = 1.0 + h2 * acc_a / k_col[ix];
        // route B: (A/K(x,w)) Σ_v G(x,v)|v-w|^{-(2+α)} E^x_v[e_q] h²
        let mut acc_b = 0.0;
        for u in 0..n {
            let interior = if u == ix { 1.0 } else { v[[ix, u]] / g[[ix, u]] };
            acc_b += g[[ix, u]] * jump[u] * interior;
        }
        let value_b = a_const * h2 * acc_b / k_col[ix];

        sup = sup.max(value_a);
        inf = inf.min(value_a);
        disagreement = disagreement.max((value_a - value_b).abs() / value_a.abs().max(1e-300));
        values.push(value_a);
    }
    Ok(ConditionalGaugeTable {
        kind: TableKind::Exterior,
        sup,
        inf,
        route_disagreement: disagreement,
        pairs: pairs.len(),
        values,
    })
}

/// Boundary conditional gauge along an approach sequence.
#[derive(Debug, Clone, serde::Serialize)]
pub struct BoundaryGauge {
    /// Interior conditional gauges `E^x_{y_k}[e_q(ζ)]` along the approach.
    pub values: Vec<f64>,
    /// Martin-kernel route: `1 + M̂(x)^{-1} Σ V_q(x,u) q(u) M̂(u) h²` with the
    /// Martin column estimated at the last approach point.
    pub martin_value: f64,
    /// |last interior value - martin_value| / martin_value.
    pub final_gap: f64,
}

/// Tracks `E^x_{y_k}[e_q(ζ)]` as `y_k → z ∈ ∂D` and compares the limit
/// against the Martin-kernel-conditioned value.
pub fn cond_gauge_boundary(
    model_q: &SpectralModel,
    model_q0: &SpectralModel,
    x: Point,
    x0: Point,
    approach: &[Point],
) -> Result<BoundaryGauge> {
    check_same_grid(model_q, model_q0)?;
    if approach.is_empty() {
        return Err(Error::InvalidArgument {
            name: "approach",
            reason: "need at least one approach point".into(),
        });
    }
    let v = model_q.green_matrix()?;
    let g = model_q0.green_matrix()?;
    let grid = &model_q.grid;
    let n = grid.cell_count();
    let h2 = grid.cell_area();
    let ix = grid
        .nearest_cell(x)
        .ok_or_else(|| Error::InsufficientData("x off the grid".into()))?;
    let ix0 = grid
        .nearest_cell(x0)
        .ok_or_else(|| Error::InsufficientData("x0 off the grid".into()))?;

    let mut values = Vec::with_capacity(approach.len());
    let mut last_iy = None;
    for &y in approach {
        if y.dist(x) < 2.0 * grid.h {
            return Err(Error::Singularity(format!(
                "approach point ({}, {}) within two cells of x",
                y.x, y.y
            )));
        }
        let iy = grid
            .nearest_cell(y)
            .ok_or_else(|| Error::InsufficientData("approach point off the grid".into()))?;
        values.push(v[[ix, iy]] / g[[ix, iy]]);
        last_iy = Some(iy);
    }
    let iy = last_iy.expect("approach checked non-empty");
    // Martin column estimate from the deepest approach point
    let m_col: Vec<f64> = (0..n).map(|u| g[[u, iy]] / g[[ix0, iy]]).collect();
    let mut acc = 0.0;
    for u in 0..n {
        acc += v[[ix, u]] * grid.potential[u] * m_col[u];
    }
    let martin_value = 1.0 + h2 * acc / m_col[ix];
    let last = *values.last().unwrap();
    Ok(BoundaryGauge {
        final_gap: (last - martin_value).abs() / martin_value.abs().max(1e-300),
        values,
        martin_value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Domain;
    use crate::kernels::Potential;
    use crate::spectral::{assemble, eigensolve, GridModel};

    fn ball_grid() -> GridModel {
        let d = Domain::ball(Point::new(0.0, 0.0), 1.0).unwrap();
        assemble(&d, 2.0 / 16.0, 1.0, &Potential::zero()).unwrap()
    }

    fn models(q: &Potential) -> (SpectralModel, SpectralModel) {
        let g0 = ball_grid();
        let gq = g0.with_potential(q).unwrap();
        (eigensolve(gq, 4).unwrap(), eigensolve(g0, 4).unwrap())
    }

    #[test]
    fn interior_table_is_one_for_zero_potential() {
        let g0 = ball_grid();
        let m0 = eigensolve(g0, 4).unwrap();
        let table = cond_gauge_interior(&m0, &m0).unwrap();
        assert_eq!(table.sup, 1.0);
        assert_eq!(table.inf, 1.0);
        assert!(table.route_disagreement < 1e-12);
    }

    #[test]
    fn interior_routes_agree_to_solver_precision() {
        let q = Potential::constant(-0.4);
        let (mq, m0) = models(&q);
        let table = cond_gauge_interior(&mq, &m0).unwrap();
        assert!(
            table.route_disagreement < 1e-8,
            "routes disagree: {}",
            table.route_disagreement
        );
        // negative potential kills mass: conditional gauge below 1
        assert!(table.sup <= 1.0 + 1e-12);
        assert!(table.inf > 0.0);
    }

    #[test]
    fn exterior_within_interior_bracket() {
        let q = Potential::constant(-0.4);
        let (mq, m0) = models(&q);
        let interior = cond_gauge_interior(&mq, &m0).unwrap();
        let pairs: Vec<(Point, Point)> = vec![
            (Point::new(0.0, 0.0), Point::new(1.6, 0.0)),
            (Point::new(0.3, 0.2), Point::new(0.0, -1.9)),
            (Point::new(-0.5, 0.0), Point::new(2.5, 2.5)),
        ];
        let table = cond_gauge_exterior(&mq, &m0, &pairs).unwrap();
        assert!(
            table.route_disagreement < 0.01,
            "exterior routes disagree: {}",
            table.route_disagreement
        );
        let lo = interior.inf * 0.9;
        let hi = interior.sup * 1.1;
        for &v in &table.values {
            assert!(v >= lo && v <= hi, "value {v} outside [{lo}, {hi}]");
        }
    }

    #[test]
    fn exterior_rejects_points_near_closure() {
        let q = Potential::constant(-0.2);
        let (mq, m0) = models(&q);
        let res = cond_gauge_exterior(&mq, &m0, &[(Point::new(0.0, 0.0), Point::new(1.05, 0.0))]);
        assert!(res.is_err());
    }

    #[test]
    fn boundary_sequence_stabilizes_to_martin_value() {
        let q = Potential::constant(-0.4);
        let (mq, m0) = models(&q);
        let x = Point::new(-0.4, 0.0);
        let x0 = Point::new(0.0, 0.0);
        let approach: Vec<Point> = (2..=5)
            .map(|k| Point::new(1.0 - 2f64.powi(-k), 0.0))
            .collect();
        let bg = cond_gauge_boundary(&mq, &m0, x, x0, &approach).unwrap();
        // successive gaps shrink
        let gaps: Vec<f64> = bg.values.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
        assert!(gaps.last().unwrap() <= &gaps[0], "gaps {gaps:?}");
        assert!(bg.final_gap < 0.02, "final gap {}", bg.final_gap);
    }

    #[test]
    fn zero_potential_boundary_sequence_is_one() {
        let g0 = ball_grid();
        let m0 = eigensolve(g0, 4).unwrap();
        let approach: Vec<Point> = (2..=4)
            .map(|k| Point::new(1.0 - 2f64.powi(-k), 0.0))
            .collect();
        let bg = cond_gauge_boundary(
            &m0,
            &m0,
            Point::new(-0.4, 0.0),
            Point::new(0.0, 0.0),
            &approach,
        )
        .unwrap();
        for v in &bg.values {
            assert_eq!(*v, 1.0);
        }
        assert!((bg.martin_value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn monotone_in_constant_potential() {
        // two constants c1 < c2 < -μ0: gauge tables nondecreasing entrywise
        let (_, m0) = models(&Potential::zero());
        let mu0 = m0.lambda0();
        let (m1, m01) = models(&Potential::constant(-mu0 * 0.2));
        let (m2, _) = models(&Potential::constant(-mu0 * 0.5));
        let t1 = cond_gauge_interior(&m1, &m01).unwrap();
        let t2 = cond_gauge_interior(&m2, &m01).unwrap();
        assert!(t2.inf >= t1.inf - 1e-12);
        assert!(t2.sup >= t1.sup - 1e-12);
        for (a, b) in t1.values.iter().zip(&t2.values) {
            assert!(b >= a, "entrywise monotonicity violated");
        }
    }
}
