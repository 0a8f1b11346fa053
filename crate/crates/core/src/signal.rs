//! Reproducible test signals and Gaussian noise.
//!
//! Randomness comes from ChaCha20 with an explicit stream index, so a given
//! `(seed, stream)` pair always yields the same numbers no matter which
//! thread asks for them or in what order.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{StandardNormal, Uniform};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::posterior::hard_threshold;

/// Stream reserved for signal layout; noise uses streams `0, 1, 2, …`.
pub const SIGNAL_STREAM: u64 = u64::MAX;

pub fn stream_rng(seed: u64, stream: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Pattern {
    /// `k` randomly placed entries equal to `mu0`.
    SpikesAtValue { k: usize, mu0: f64 },
    /// `k` randomly placed entries drawn uniformly from `(lo, hi)`.
    UniformSpikes { k: usize, lo: f64, hi: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignalSpec {
    pub n: usize,
    pub pattern: Pattern,
    pub seed: u64,
}

impl SignalSpec {
    pub fn nonzero_count(&self) -> usize {
        match self.pattern {
            Pattern::SpikesAtValue { k, .. } | Pattern::UniformSpikes { k, .. } => k,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoisyRealization {
    pub mu: Vec<f64>,
    pub x: Vec<f64>,
    pub seed_used: u64,
    pub stream: u64,
}

pub fn gen_signal(spec: &SignalSpec) -> Result<Vec<f64>> {
    let k = spec.nonzero_count();
    if k > spec.n {
        return Err(Error::InvalidParameter(format!("cannot place {k} spikes in length {}", spec.n)));
    }
    let mut rng = stream_rng(spec.seed, SIGNAL_STREAM);
    let mut mu = vec![0.0; spec.n];
    let positions = index::sample(&mut rng, spec.n, k);
    match spec.pattern {
        Pattern::SpikesAtValue { mu0, .. } => {
            for i in positions {
                mu[i] = mu0;
            }
        }
        Pattern::UniformSpikes { lo, hi, .. } => {
            if !(lo < hi && lo.is_finite() && hi.is_finite()) {
                return Err(Error::InvalidParameter(format!("uniform range ({lo}, {hi}) is empty")));
            }
            let dist = Uniform::new(lo, hi).map_err(|e| Error::InvalidParameter(e.to_string()))?;
            for i in positions {
                let mut v = rng.sample(dist);
                while v == 0.0 || v == lo {
                    v = rng.sample(dist);
                }
                mu[i] = v;
            }
        }
    }
    Ok(mu)
}

/// Standard normal noise from stream `stream` of `seed`.
pub fn noise(n: usize, seed: u64, stream: u64) -> Vec<f64> {
    let mut rng = stream_rng(seed, stream);
    (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()
}

pub fn add_noise(mu: &[f64], seed: u64, stream: u64) -> NoisyRealization {
    let eps = noise(mu.len(), seed, stream);
    let x = mu.iter().zip(&eps).map(|(m, e)| m + e).collect();
    NoisyRealization { mu: mu.to_vec(), x, seed_used: seed, stream }
}

/// Number of points in the default oracle threshold grid.
pub const DEFAULT_GRID_POINTS: usize = 430;

/// Evenly spaced thresholds on `[0, √(2 log n)]`.
pub fn default_grid(n: usize) -> Result<Vec<f64>> {
    let top = crate::competitors::universal_threshold(n)?;
    let m = DEFAULT_GRID_POINTS - 1;
    Ok((0..=m).map(|i| top * i as f64 / m as f64).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleSweep {
    pub best_t: f64,
    pub best_error: f64,
    /// `(t, n⁻¹ Σ (hard(x_i, t) − μ_i)²)` for every grid point.
    pub curve: Vec<(f64, f64)>,
}

pub fn hard_threshold_mse(mu: &[f64], x: &[f64], t: f64) -> f64 {
    let sum: f64 = x.iter().zip(mu).map(|(&xi, &mi)| (hard_threshold(xi, t) - mi).powi(2)).sum();
    sum / x.len() as f64
}

/// Average squared error of hard thresholding at each grid threshold, with
/// the minimising threshold (ties to the smaller one).
pub fn oracle_threshold_sweep(mu: &[f64], x: &[f64], grid: &[f64]) -> Result<OracleSweep> {
    if mu.len() != x.len() {
        return Err(Error::LengthMismatch { left: mu.len(), right: x.len() });
    }
    if x.is_empty() {
        return Err(Error::TooFewObservations { needed: 1, got: 0 });
    }
    if grid.is_empty() || grid.iter().any(|&t| t.is_nan() || t < 0.0) || grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidParameter("threshold grid must be non-empty, non-negative and sorted".into()));
    }
    let curve: Vec<(f64, f64)> = grid.iter().map(|&t| (t, hard_threshold_mse(mu, x, t))).collect();
    let (best_t, best_error) = curve
        .iter()
        .copied()
        .fold((f64::NAN, f64::INFINITY), |best, (t, e)| if e < best.1 { (t, e) } else { best });
    Ok(OracleSweep { best_t, best_error, curve })
}
