//! Empirical Bayes thresholding for sparse sequences observed in Gaussian
//! white noise.
//!
//! Each observation is modelled as `X_i = μ_i + ε_i` with standard normal
//! noise and a spike-and-slab prior `(1 − w) δ₀ + w γ` on the means. The
//! mixing weight `w` (and optionally a Laplace scale) is fitted by marginal
//! maximum likelihood; the fitted prior then drives a posterior median,
//! posterior mean, hard or soft thresholding rule.
//!
//! The crate also carries the competitor threshold rules (SURE, hybrid SURE,
//! FDR, universal), a reproducible signal/noise generator and a Monte Carlo
//! harness for comparing all of them.

pub mod bench;
pub mod competitors;
pub mod error;
pub mod io;
pub mod mml;
pub mod normal;
pub mod posterior;
pub mod prior;
pub mod quadrature;
pub mod signal;
pub mod solve;

pub use error::{Error, ErrorClass, Result};
pub use posterior::{ThresholdPair, Weight};
pub use prior::PriorSpec;
