//! Classical threshold choices used as benchmarks: SURE, the hybrid
//! SURE/universal rule, FDR and universal thresholding.
//!
//! All of them assume unit noise variance.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::normal;

/// FDR rate `q ∈ (0, ½]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FdrConfig {
    q_rate: f64,
}

impl FdrConfig {
    pub fn new(q_rate: f64) -> Result<Self> {
        if q_rate > 0.0 && q_rate <= 0.5 {
            Ok(FdrConfig { q_rate })
        } else {
            Err(Error::InvalidParameter(format!("FDR rate must lie in (0, 1/2], got {q_rate}")))
        }
    }

    pub fn q_rate(&self) -> f64 {
        self.q_rate
    }

    /// Quantile boundary `t_k = z(q/2 · k/n)`.
    pub fn boundary(&self, k: usize, n: usize) -> f64 {
        normal::isf(0.5 * self.q_rate * k as f64 / n as f64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdMethod {
    Sure,
    SureHybrid,
    Fdr,
    UniversalSoft,
    UniversalHard,
    EbayesMedianThreshold,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Diagnostics {
    None,
    Sure { objective_min: f64 },
    Hybrid { sparsity_stat: f64, critical: f64, used_universal: bool },
    Fdr { crossing_index: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdChoice {
    pub t: f64,
    pub method: ThresholdMethod,
    pub diagnostics: Diagnostics,
}

/// `√(2 log n)`.
pub fn universal_threshold(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::TooFewObservations { needed: 2, got: n });
    }
    Ok((2.0 * (n as f64).ln()).sqrt())
}

/// Stein's unbiased estimate of the soft-thresholding risk,
/// `Û(t) = n + Σ min(x², t²) − 2 #{x² ≤ t²}`.
pub fn sure_objective(data: &[f64], t: f64) -> f64 {
    let t2 = t * t;
    let mut total = data.len() as f64;
    for &x in data {
        let x2 = x * x;
        if x2 <= t2 {
            total += x2 - 2.0;
        } else {
            total += t2;
        }
    }
    total
}

/// Minimiser of `Û` over `[0, √(2 log n)]`.
///
/// `Û` increases between consecutive order statistics of `|x|` and drops at
/// each of them, so the minimum is attained on the candidate set
/// `{0} ∪ {|x_k| ≤ √(2 log n)} ∪ {√(2 log n)}`. Ties go to the smaller `t`.
pub fn sure_threshold(data: &[f64]) -> Result<ThresholdChoice> {
    if data.is_empty() {
        return Err(Error::TooFewObservations { needed: 1, got: 0 });
    }
    let n = data.len();
    let cap = if n >= 2 { universal_threshold(n)? } else { 0.0 };
    let mut abs: Vec<f64> = data.iter().map(|x| x.abs()).collect();
    abs.sort_by(f64::total_cmp);

    // scan candidates in increasing order with running counts
    let nf = n as f64;
    let mut best_t = 0.0;
    let mut best_u = f64::INFINITY;
    let mut below = 0usize; // #{|x| ≤ t}
    let mut sumsq = 0.0; // Σ_{|x| ≤ t} x²
    let mut consider = |t: f64, below: usize, sumsq: f64| {
        let u = nf + sumsq + (n - below) as f64 * t * t - 2.0 * below as f64;
        if u < best_u {
            best_u = u;
            best_t = t;
        }
    };
    let mut i = 0;
    while i < n && abs[i] == 0.0 {
        below += 1;
        i += 1;
    }
    consider(0.0, below, sumsq);
    while i < n && abs[i] <= cap {
        let t = abs[i];
        while i < n && abs[i] == t {
            below += 1;
            sumsq += t * t;
            i += 1;
        }
        consider(t, below, sumsq);
    }
    consider(cap, below, sumsq);
    Ok(ThresholdChoice { t: best_t, method: ThresholdMethod::Sure, diagnostics: Diagnostics::Sure { objective_min: best_u } })
}

/// Sparsity test of the hybrid rule: `s² = n⁻¹ Σ (x² − 1)` against
/// `γ_n = n^{−1/2} (log₂ n)^{3/2}`.
pub fn sparsity_statistic(data: &[f64]) -> (f64, f64) {
    let n = data.len() as f64;
    let s2 = data.iter().map(|x| x * x - 1.0).sum::<f64>() / n;
    let critical = n.log2().powf(1.5) / n.sqrt();
    (s2, critical)
}

/// Hybrid SURE: universal threshold when the sparsity test says the signal
/// is sparse, SURE otherwise.
pub fn sure_hybrid_threshold(data: &[f64]) -> Result<ThresholdChoice> {
    let universal = universal_threshold(data.len())?;
    let (s2, critical) = sparsity_statistic(data);
    let used_universal = s2 <= critical;
    let t = if used_universal { universal } else { sure_threshold(data)?.t };
    Ok(ThresholdChoice {
        t,
        method: ThresholdMethod::SureHybrid,
        diagnostics: Diagnostics::Hybrid { sparsity_stat: s2, critical, used_universal },
    })
}

/// FDR threshold: with `|x|_(1) ≥ … ≥ |x|_(n)`, take
/// `k̂ = max{k : |x|_(k) ≥ t_k}` and return `t_k̂`. When no `k` qualifies
/// the threshold is `max|x| + 1`, which zeroes everything.
pub fn fdr_threshold(data: &[f64], cfg: &FdrConfig) -> Result<ThresholdChoice> {
    if data.is_empty() {
        return Err(Error::TooFewObservations { needed: 1, got: 0 });
    }
    let n = data.len();
    let mut abs: Vec<f64> = data.iter().map(|x| x.abs()).collect();
    abs.sort_by(|a, b| b.total_cmp(a));
    let crossing = (1..=n).rev().find(|&k| abs[k - 1] >= cfg.boundary(k, n)).unwrap_or(0);
    let t = if crossing == 0 { abs[0] + 1.0 } else { cfg.boundary(crossing, n) };
    Ok(ThresholdChoice { t, method: ThresholdMethod::Fdr, diagnostics: Diagnostics::Fdr { crossing_index: crossing } })
}
