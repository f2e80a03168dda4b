//! Built-in sampler diagnostics: characteristic function, subordinator
//! Laplace transform, and the α=1 ball-exit tail.

use super::{positive_stable, sample_ball_exit_radius, sample_increment};
use crate::error::Result;
use crate::par_chunk_map;
use crate::rng::RngStream;

#[derive(Debug, Clone, serde::Serialize)]
pub struct SelfTestOutcome {
    pub name: String,
    pub statistic: f64,
    pub target: f64,
    pub sigma: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct SelfTestReport {
    pub outcomes: Vec<SelfTestOutcome>,
    pub all_pass: bool,
}

/// Runs the three sampler self-tests at the given α values. Each statistic
/// must land within 3σ of its closed-form target. Work is partitioned into
/// fixed chunks keyed by stream id, so the report is identical at any worker
/// count.
pub fn mc_selftest(alphas: &[f64], draws_per_test: usize, seed: u64) -> Result<SelfTestReport> {
    let mut outcomes = Vec::new();
    let chunks = 64;

    for (ai, &alpha) in alphas.iter().enumerate() {
        // characteristic function E cos(ξ·X_1) = exp(-|ξ|^α)
        for (xi_i, xi) in [0.5, 1.0, 2.0].into_iter().enumerate() {
            let base = (ai * 16 + xi_i) as u64 * 1000;
            let partials = par_chunk_map(draws_per_test, chunks, |range| {
                let mut rng = RngStream::new(seed, base + range.start as u64);
                let mut s = 0.0;
                let mut s2 = 0.0;
                for _ in range {
                    let x = sample_increment(alpha, 1.0, 2, &mut rng).unwrap();
                    let v = (xi * x[0]).cos();
                    s += v;
                    s2 += v * v;
                }
                (s, s2)
            });
            let (s, s2) = partials
                .iter()
                .fold((0.0, 0.0), |(a, b), (c, d)| (a + c, b + d));
            let n = draws_per_test as f64;
            let mean = s / n;
            let sigma = ((s2 / n - mean * mean).max(0.0) / n).sqrt();
            let target = (-(xi as f64).powf(alpha)).exp();
            outcomes.push(SelfTestOutcome {
                name: format!("char_fn alpha={alpha} |xi|={xi}"),
                statistic: mean,
                target,
                sigma,
                pass: (mean - target).abs() <= 3.0 * sigma + 1e-12,
            });
        }

        // subordinator Laplace transform E exp(-λ S) = exp(-λ^{α/2})
        for (li, lambda) in [0.5, 1.0, 2.0].into_iter().enumerate() {
            let base = (ai * 16 + 8 + li) as u64 * 1000;
            let partials = par_chunk_map(draws_per_test, chunks, |range| {
                let mut rng = RngStream::new(seed, base + range.start as u64);
                let mut s = 0.0;
                let mut s2 = 0.0;
                for _ in range {
                    let v = (-lambda * positive_stable(alpha / 2.0, &mut rng).unwrap()).exp();
                    s += v;
                    s2 += v * v;
                }
                (s, s2)
            });
            let (s, s2) = partials
                .iter()
                .fold((0.0, 0.0), |(a, b), (c, d)| (a + c, b + d));
            let n = draws_per_test as f64;
            let mean = s / n;
            let sigma = ((s2 / n - mean * mean).max(0.0) / n).sqrt();
            let target = (-(lambda as f64).powf(alpha / 2.0)).exp();
            outcomes.push(SelfTestOutcome {
                name: format!("laplace alpha={alpha} lambda={lambda}"),
                statistic: mean,
                target,
                sigma,
                pass: (mean - target).abs() <= 3.0 * sigma + 1e-12,
            });
        }
    }

    // ball-exit tail at α = 1: P(R > 2) = 1/3 exactly
    let partials = par_chunk_map(draws_per_test, chunks, |range| {
        let mut rng = RngStream::new(seed, 900_000 + range.start as u64);
        let mut hits = 0usize;
        for _ in range {
            if sample_ball_exit_radius(1.0, &mut rng).unwrap() > 2.0 {
                hits += 1;
            }
        }
        hits
    });
    let hits: usize = partials.iter().sum();
    let n = draws_per_test as f64;
    let p = hits as f64 / n;
    let sigma = (p * (1.0 - p) / n).sqrt();
    outcomes.push(SelfTestOutcome {
        name: "ball_exit_tail alpha=1 P(R>2)".into(),
        statistic: p,
        target: 1.0 / 3.0,
        sigma,
        pass: (p - 1.0 / 3.0).abs() <= 3.0 * sigma,
    });

    let all_pass = outcomes.iter().all(|o| o.pass);
    Ok(SelfTestReport { outcomes, all_pass })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selftest_passes_at_default_budget() {
        let r = mc_selftest(&[0.5, 1.0, 1.5], 120_000, 1234).unwrap();
        for o in &r.outcomes {
            assert!(o.pass, "{}: {} vs {} (σ={})", o.name, o.statistic, o.target, o.sigma);
        }
        assert!(r.all_pass);
    }

    #[test]
    fn selftest_deterministic() {
        let a = mc_selftest(&[1.0], 20_000, 7).unwrap();
        let b = mc_selftest(&[1.0], 20_000, 7).unwrap();
        for (x, y) in a.outcomes.iter().zip(&b.outcomes) {
            assert_eq!(x.statistic, y.statistic);
        }
    }
}
