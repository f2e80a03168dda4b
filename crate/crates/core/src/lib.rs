//! Numerical laboratory for symmetric α-stable processes killed on planar
//! domains.
//!
//! The crate computes the classical objects of the killed process `X^D` for
//! `0 < α < 2` — Green function `G_D`, Poisson kernel `K_D`, Martin kernel
//! ratios, Feynman–Kac gauge `E^x[e_q(τ_D)]`, conditional gauges and
//! conditional lifetimes — by two independent routes:
//!
//! * **Monte Carlo**: exact-in-space walk-on-spheres exits plus Euler
//!   time-stepping with exact α-stable increments ([`mc`]).
//! * **Spectral**: a nonlocal stiffness matrix assembled from the jump kernel
//!   `A(n,α)|x-y|^{-(n+α)}` with exact exterior killing, eigendecomposed to
//!   heat kernels and Green matrices ([`spectral`]).
//!
//! [`geometry`] provides the test domains (ball, axis box, simple polygon),
//! Whitney decompositions and quasi-hyperbolic distance estimates; [`gauge`]
//! holds the gauge/conditional-gauge/lifetime diagnostics built on top of the
//! spectral models.

pub mod error;
pub mod gauge;
pub mod geometry;
pub mod kernels;
pub mod mc;
pub(crate) mod quad;
pub mod rng;
pub mod spectral;

pub use error::{Error, Result};
pub use geometry::{Domain, Point, WhitneyCube, WhitneyGraph};
pub use kernels::{free_green, stable_constant, Potential};
pub use rng::RngStream;

/// Deterministic parallel map: splits `0..n` into `chunks` index ranges,
/// evaluates them in parallel, and returns the per-chunk results in chunk
/// order. The output is independent of the worker count, so estimators built
/// on it reproduce bit-identically at any thread count.
pub fn par_chunk_map<T, F>(n: usize, chunks: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(std::ops::Range<usize>) -> T + Sync,
{
    use rayon::prelude::*;
    let chunks = chunks.clamp(1, n.max(1));
    let bounds: Vec<(usize, usize)> = (0..chunks)
        .map(|c| (c * n / chunks, (c + 1) * n / chunks))
        .collect();
    bounds.into_par_iter().map(|(a, b)| f(a..b)).collect()
}
