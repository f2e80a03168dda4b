//! Grid-refinement study of the top eigenvalue and the Monte Carlo
//! survival slope for the unit ball.
//!
//! Run with: cargo run --release -p stablegauge --example mu0_convergence

use stablegauge::geometry::{Domain, Point};
use stablegauge::kernels::Potential;
use stablegauge::rng::RngStream;
use stablegauge::spectral::{assemble, eigensolve, survival_decay_rate};

fn main() {
    let domain = Domain::ball(Point::new(0.0, 0.0), 1.0).unwrap();
    for alpha in [0.5, 1.0, 1.5] {
        println!("alpha = {alpha}");
        for n in [16usize, 32, 64] {
            let t0 = std::time::Instant::now();
            let grid = assemble(&domain, 2.0 / n as f64, alpha, &Potential::zero()).unwrap();
            let cells = grid.cell_count();
            let model = eigensolve(grid, 4).unwrap();
            println!(
                "  n={n:3} cells={cells:5} mu0={:+.6} mu1={:+.6} gap={:.4}  ({:.2?})",
                model.eigenvalues[0],
                model.eigenvalues[1],
                model.eigenvalues[1] - model.eigenvalues[0],
                t0.elapsed()
            );
        }
    }
    // mean exit time from the center: grid quadrature vs the closed form
    // 2/pi for the unit disk at alpha = 1
    for n in [16usize, 32, 64] {
        let grid = assemble(&domain, 2.0 / n as f64, 1.0, &Potential::zero()).unwrap();
        let model = eigensolve(grid, 4).unwrap();
        let green = model.green_matrix().unwrap();
        let c = model.grid.nearest_cell(Point::new(0.0, 0.0)).unwrap();
        let h2 = model.grid.cell_area();
        let et: f64 = (0..model.grid.cell_count()).map(|j| green[[c, j]]).sum::<f64>() * h2;
        println!("  n={n:3} E0[tau]={et:.6} (exact 2/pi = {:.6})", 2.0 / std::f64::consts::PI);
    }
    // Monte Carlo slope at shrinking dt, late windows
    let rng = RngStream::new(4242, 0);
    for alpha in [1.0] {
        for (paths, dt, t_max) in [
            (100_000usize, 0.01, 5.0),
            (200_000, 0.004, 6.0),
            (400_000, 0.002, 7.0),
        ] {
            let t0 = std::time::Instant::now();
            let rate = survival_decay_rate(
                &domain,
                alpha,
                Point::new(0.0, 0.0),
                paths,
                t_max,
                dt,
                &rng,
            )
            .unwrap();
            println!(
                "mc alpha={alpha} paths={paths} dt={dt} t_max={t_max}: slope={:+.5} se={:.5} window=({:.2},{:.2}) survivors={} ({:.2?})",
                rate.slope,
                rate.std_err,
                rate.window.0,
                rate.window.1,
                rate.survivors_at_window_end,
                t0.elapsed()
            );
        }
    }
}
