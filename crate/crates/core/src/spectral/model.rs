//! Eigensolves, heat kernels and Green matrices of the discretized
//! generator.

use ndarray::{Array1, Array2, ArrayView1, Axis};
use ndarray_linalg::{Eigh, FactorizeC, InverseC, SolveC, UPLO};

use super::GridModel;
use crate::error::{Error, Result};

/// Above this cell count the dense eigensolve is replaced by inverse
/// subspace iteration for the leading eigenpairs only.
pub const DENSE_EIGEN_CAP: usize = 3000;

/// Eigenpairs of `L^D + q` on a grid, in decreasing eigenvalue order, with
/// eigenfunctions orthonormal under the cell-area inner product and the
/// ground state sign-fixed positive.
#[derive(Debug, Clone)]
pub struct SpectralModel {
    pub grid: GridModel,
    /// λ_0 >= λ_1 >= ... (top of the spectrum first).
    pub eigenvalues: Vec<f64>,
    /// Column k holds φ_k; `h² Σ_i φ_k(i)² = 1`.
    pub eigenfunctions: Array2<f64>,
    /// True when every grid mode is present (dense solve).
    pub complete: bool,
    /// λ_0 and λ_1 coincide beyond 1e-10: the ground state of the killed
    /// generator must be simple, so this flags a discretization artifact.
    pub degenerate_ground: bool,
    /// Minimum of φ_0 over cells (strict positivity check).
    pub ground_state_min: f64,
}

/// Heat kernel matrix `u_q(t, x_i, x_j)` in density normalization.
#[derive(Debug, Clone)]
pub struct HeatKernel {
    pub t: f64,
    pub values: Array2<f64>,
    /// Set when a truncated mode family cannot resolve this t.
    pub truncated: bool,
}

/// Computes the top-k eigenpairs of `L^D + q` (all of them for grids up to
/// [`DENSE_EIGEN_CAP`] cells; k clamped to 11 above that, by iteration).
pub fn eigensolve(grid: GridModel, k: usize) -> Result<SpectralModel> {
    let n = grid.cell_count();
    if k > n {
        return Err(Error::InvalidArgument {
            name: "k",
            reason: format!("requested {k} eigenpairs from a {n}-cell grid"),
        });
    }
    let (sigmas, vectors) = if n <= DENSE_EIGEN_CAP {
        let (vals, vecs) = grid.stiffness.eigh(UPLO::Lower)?;
        (vals.to_vec(), vecs)
    } else {
        let m = k.clamp(2, 11);
        inverse_subspace_iteration(&grid.stiffness, m)?
    };

    // eigenvalues of L+q are the negated stiffness eigenvalues; ascending
    // stiffness order is already decreasing generator order
    let eigenvalues: Vec<f64> = sigmas.iter().map(|s| -s).collect();
    let h = grid.h;
    let mut eigenfunctions = vectors.mapv(|v| v / h);
    // sign-fix the ground state
    let col0_sum: f64 = eigenfunctions.column(0).sum();
    if col0_sum < 0.0 {
        for v in eigenfunctions.column_mut(0) {
            *v = -*v;
        }
    }
    let ground_state_min = eigenfunctions
        .column(0)
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    let degenerate_ground = eigenvalues.len() > 1
        && (eigenvalues[0] - eigenvalues[1]).abs() < 1e-10 * eigenvalues[0].abs().max(1.0);

    Ok(SpectralModel {
        complete: eigenvalues.len() == n,
        grid,
        eigenvalues,
        eigenfunctions,
        degenerate_ground,
        ground_state_min,
    })
}

/// Smallest-m eigenpairs of a symmetric positive definite matrix by inverse
/// subspace iteration with Rayleigh-Ritz extraction. Guard vectors keep
/// degenerate clusters inside the iterated block.
fn inverse_subspace_iteration(s: &Array2<f64>, m: usize) -> Result<(Vec<f64>, Array2<f64>)> {
    let n = s.nrows();
    let block = (m + 6).min(n);
    let factor = s.factorizec(UPLO::Lower)?;
    // deterministic start
    let mut x = Array2::<f64>::zeros((n, block));
    for j in 0..block {
        for i in 0..n {
            x[[i, j]] = (((i + 1) * (j + 1)) as f64 * 0.618_033_988_749_894_8).sin() + 1e-3;
        }
    }
    orthonormalize(&mut x);
    let mut tau: Vec<f64> = vec![f64::INFINITY; block];
    let mut worst = f64::INFINITY;
    for iter in 0..1000 {
        let mut y = Array2::<f64>::zeros((n, block));
        for j in 0..block {
            let col = factor.solvec(&x.column(j).to_owned())?;
            y.column_mut(j).assign(&col);
        }
        orthonormalize(&mut y);
        let sy = s.dot(&y);
        let b = y.t().dot(&sy);
        let (t, w) = b.eigh(UPLO::Lower)?;
        x = y.dot(&w);
        tau = t.to_vec();
        if iter % 8 == 7 {
            // converged once the wanted modes have small residuals
            let sx = s.dot(&x);
            worst = (0..m)
                .map(|j| {
                    let r = (&sx.column(j) - &(&x.column(j) * tau[j]))
                        .iter()
                        .map(|v| v * v)
                        .sum::<f64>()
                        .sqrt();
                    r / tau[j].abs().max(1e-300)
                })
                .fold(0.0f64, f64::max);
            if worst < 1e-9 {
                break;
            }
        }
    }
    if worst >= 1e-6 {
        return Err(Error::NoConvergence(format!(
            "inverse iteration stalled at relative residual {worst}"
        )));
    }
    let wanted = x.slice(ndarray::s![.., ..m]).to_owned();
    Ok((tau[..m].to_vec(), wanted))
}

fn orthonormalize(x: &mut Array2<f64>) {
    let m = x.ncols();
    for j in 0..m {
        for i in 0..j {
            let proj = x.column(i).dot(&x.column(j));
            let col_i = x.column(i).to_owned();
            let mut col_j = x.column_mut(j);
            col_j.scaled_add(-proj, &col_i);
        }
        let norm = x.column(j).dot(&x.column(j)).sqrt();
        if norm > 0.0 {
            x.column_mut(j).mapv_inplace(|v| v / norm);
        }
    }
}

impl SpectralModel {
    pub fn lambda0(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn ground_state(&self) -> ArrayView1<'_, f64> {
        self.eigenfunctions.column(0)
    }

    /// `h² Σ_i φ_k(i) f_i`.
    pub fn mode_inner(&self, k: usize, f: &[f64]) -> f64 {
        let h2 = self.grid.h * self.grid.h;
        h2 * self
            .eigenfunctions
            .column(k)
            .iter()
            .zip(f)
            .map(|(a, b)| a * b)
            .sum::<f64>()
    }

    /// Spectral heat kernel `u_q(t) = Σ_k e^{λ_k t} φ_k φ_kᵀ`.
    pub fn heat_kernel(&self, t: f64) -> Result<HeatKernel> {
        if !(t > 0.0) {
            return Err(Error::InvalidArgument {
                name: "t",
                reason: format!("time must be positive, got {t}"),
            });
        }
        let kcount = self.eigenvalues.len();
        let last_gap = self.eigenvalues[kcount - 1] - self.eigenvalues[0];
        let truncated = !self.complete && last_gap * t > (1e-12f64).ln();
        let weights: Array1<f64> =
            Array1::from_iter(self.eigenvalues.iter().map(|l| (l * t).exp()));
        let mut scaled = self.eigenfunctions.clone();
        for (mut col, w) in scaled.columns_mut().into_iter().zip(weights.iter()) {
            col.mapv_inplace(|v| v * w);
        }
        let values = scaled.dot(&self.eigenfunctions.t());
        Ok(HeatKernel { t, values, truncated })
    }

    /// Green matrix `V_q = (-(L+q))^{-1}` in density normalization
    /// (`stiffness⁻¹ / h²`); requires gaugeability (λ_0 < 0).
    pub fn green_matrix(&self) -> Result<Array2<f64>> {
        if self.lambda0() >= 0.0 {
            return Err(Error::NotGaugeable {
                lambda0: self.lambda0(),
            });
        }
        let h2 = self.grid.h * self.grid.h;
        let inv = self.grid.stiffness.invc()?;
        Ok(inv.mapv(|v| v / h2))
    }

    /// Survival probabilities `P^{x_i}(τ_D > t)` for the q = 0 model:
    /// heat-kernel row sums times the cell area.
    pub fn survival(&self, t: f64) -> Result<Vec<f64>> {
        let hk = self.heat_kernel(t)?;
        let h2 = self.grid.h * self.grid.h;
        Ok(hk
            .values
            .sum_axis(Axis(1))
            .iter()
            .map(|v| v * h2)
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Domain, Point};
    use crate::kernels::Potential;
    use crate::spectral::assemble;

    fn ball_model(n: usize) -> SpectralModel {
        let d = Domain::ball(Point::new(0.0, 0.0), 1.0).unwrap();
        let g = assemble(&d, 2.0 / n as f64, 1.0, &Potential::zero()).unwrap();
        eigensolve(g, 8).unwrap()
    }

    #[test]
    fn spectrum_negative_and_ordered() {
        let m = ball_model(16);
        assert!(m.lambda0() < 0.0, "top eigenvalue {}", m.lambda0());
        assert!(m.eigenvalues[1] < m.eigenvalues[0]);
        for w in m.eigenvalues.windows(2) {
            assert!(w[1] <= w[0] + 1e-12);
        }
        assert!(!m.degenerate_ground);
        assert!(m.ground_state_min > 0.0);
    }

    #[test]
    fn eigenfunctions_orthonormal_under_cell_inner_product() {
        let m = ball_model(12);
        for a in 0..6 {
            for b in 0..6 {
                let dot = m.mode_inner(a, m.eigenfunctions.column(b).as_slice().unwrap());
                let target = if a == b { 1.0 } else { 0.0 };
                assert!((dot - target).abs() < 1e-8, "({a},{b}): {dot}");
            }
        }
    }

    #[test]
    fn heat_kernel_symmetric_and_submarkov() {
        let m = ball_model(12);
        let hk = m.heat_kernel(0.5).unwrap();
        let n = m.grid.cell_count();
        for i in 0..n {
            for j in 0..i {
                let rel = (hk.values[[i, j]] - hk.values[[j, i]]).abs();
                assert!(rel < 1e-10);
            }
        }
        let s1 = m.survival(0.5).unwrap();
        let s2 = m.survival(1.0).unwrap();
        for i in 0..n {
            assert!(s1[i] > 0.0 && s1[i] <= 1.0 + 1e-8, "s1[{i}] = {}", s1[i]);
            assert!(s2[i] <= s1[i] + 1e-10, "survival must decrease in t");
        }
    }

    #[test]
    fn green_matrix_inverts_stiffness() {
        let m = ball_model(12);
        let g = m.green_matrix().unwrap();
        let h2 = m.grid.h * m.grid.h;
        let prod = m.grid.stiffness.dot(&g);
        let n = m.grid.cell_count();
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { 1.0 / h2 } else { 0.0 };
                assert!(
                    (prod[[i, j]] - target).abs() < 1e-6 / h2 * 1e-2,
                    "({i},{j}): {} vs {target}",
                    prod[[i, j]]
                );
            }
        }
        for i in 0..n {
            for j in 0..n {
                assert!(g[[i, j]] > 0.0, "Green entries must be positive");
            }
        }
    }

    #[test]
    fn green_matches_spectral_sum() {
        let m = ball_model(12);
        let g = m.green_matrix().unwrap();
        let n = m.grid.cell_count();
        let mut spectral = Array2::<f64>::zeros((n, n));
        for k in 0..n {
            let w = -1.0 / m.eigenvalues[k];
            let phi = m.eigenfunctions.column(k);
            for i in 0..n {
                for j in 0..n {
                    spectral[[i, j]] += w * phi[i] * phi[j];
                }
            }
        }
        let mut max_rel = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let rel = (spectral[[i, j]] - g[[i, j]]).abs() / g[[i, j]];
                max_rel = max_rel.max(rel);
            }
        }
        assert!(max_rel < 1e-8, "max relative gap {max_rel}");
    }

    #[test]
    fn not_gaugeable_rejected() {
        let d = Domain::ball(Point::new(0.0, 0.0), 1.0).unwrap();
        let g = assemble(&d, 2.0 / 12.0, 1.0, &Potential::zero()).unwrap();
        let mu0 = eigensolve(g.clone(), 2).unwrap().lambda0();
        let shifted = g.with_potential(&Potential::constant(-mu0 + 0.5)).unwrap();
        let m = eigensolve(shifted, 2).unwrap();
        assert!(m.lambda0() > 0.0);
        assert!(matches!(
            m.green_matrix(),
            Err(Error::NotGaugeable { .. })
        ));
    }

    #[test]
    fn iterative_matches_dense_on_small_grid() {
        let d = Domain::ball(Point::new(0.0, 0.0), 1.0).unwrap();
        let g = assemble(&d, 2.0 / 12.0, 1.0, &Potential::zero()).unwrap();
        let dense = eigensolve(g.clone(), 4).unwrap();
        let (sig, vecs) = inverse_subspace_iteration(&g.stiffness, 4).unwrap();
        for j in 0..4 {
            assert!(
                (sig[j] + dense.eigenvalues[j]).abs() < 1e-8 * sig[j].abs(),
                "mode {j}: {} vs {}",
                -sig[j],
                dense.eigenvalues[j]
            );
        }
        // eigenvectors agree as subspaces: each iterated vector must lie in
        // the span of the dense vectors of the same eigenvalue cluster
        // (modes 1 and 2 are a degenerate pair on the disk)
        for j in 0..4 {
            let cluster: Vec<usize> = (0..4)
                .filter(|&k| (dense.eigenvalues[k] + sig[j]).abs() < 1e-6 * sig[j].abs())
                .collect();
            let mut proj_sq = 0.0;
            for &k in &cluster {
                let dot: f64 = vecs
                    .column(j)
                    .iter()
                    .zip(dense.eigenfunctions.column(k))
                    .map(|(a, b)| a * b * g.h)
                    .sum();
                proj_sq += dot * dot;
            }
            assert!(
                proj_sq > 1.0 - 1e-7,
                "mode {j}: projection onto cluster {cluster:?} is {proj_sq}"
            );
        }
    }
}
