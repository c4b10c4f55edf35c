//! Pseudo-spectral elastic wave propagation on a periodic box together with
//! the harmonic-analysis pieces needed to probe weighted space-time
//! (Morawetz-type) estimates numerically: homogeneous Sobolev norms,
//! singular-weight space-time norms, Littlewood–Paley projections,
//! A₂ products of power weights and the frequency-localized half-wave kernel.
//!
//! Module map:
//!
//! - [`spectral`]: grids, frequency lattices, transforms, multipliers.
//! - [`elastic`]: Lamé symbol, Helmholtz projectors and the exact propagator.
//! - [`analysis`]: norms, dyadic projections, A₂ estimator.
//! - [`kernel`]: the oscillatory kernel `I_k` and its decay fits.
//! - [`harness`]: region classification, ratio measurements and scans.
//! - [`cli`]: configuration parsing and artifact emission for the binary.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod cli;
pub mod elastic;
pub mod error;
pub mod harness;
pub mod kernel;
pub mod numeric;
pub mod spectral;

pub use error::{Error, Result};
pub use num_complex::Complex64;
