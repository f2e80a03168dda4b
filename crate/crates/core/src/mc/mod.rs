//! Monte Carlo machinery for the killed symmetric α-stable process.
//!
//! Increments are sampled exactly by subordination (positive (α/2)-stable
//! time change of Brownian motion), ball exits come from the explicit radial
//! exit law of the process started at a ball center, and walk-on-spheres
//! chains those exits into an exact draw from the exit distribution of a
//! domain. Time-resolved paths use Euler stepping with exact increments and
//! accumulate the Feynman–Kac integral `∫ q(X_s) ds` by the left-endpoint
//! rule.

mod ball_exit;
mod increments;
mod selftest;
mod walk;
mod wos;

pub use ball_exit::{ball_exit_cdf, sample_ball_exit_radius};
pub use increments::{positive_stable, sample_increment};
pub use selftest::{mc_selftest, SelfTestOutcome, SelfTestReport};
pub use walk::{feynman_kac_weight, killed_walk, StablePath};
pub use wos::{wos_exit, WosTrace};
