//! Posterior quantities under the mixture prior `(1 − w) δ₀ + w γ` at a
//! fixed weight, plus the hard and soft thresholding rules.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::normal::ln_add_exp;
use crate::prior::PriorSpec;
use crate::solve;

/// Solver tolerance for every threshold and median computation.
pub const SOLVE_TOL: f64 = 1e-12;

/// Mixing weight `w ∈ (0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Weight(f64);

impl Weight {
    pub fn new(w: f64) -> Result<Self> {
        if w > 0.0 && w <= 1.0 {
            Ok(Weight(w))
        } else {
            Err(Error::InvalidParameter(format!("weight must lie in (0, 1], got {w}")))
        }
    }

    pub const ONE: Weight = Weight(1.0);

    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Weight {
    type Error = Error;
    fn try_from(w: f64) -> Result<Self> {
        Weight::new(w)
    }
}

impl From<Weight> for f64 {
    fn from(w: Weight) -> f64 {
        w.0
    }
}

/// Posterior-median threshold and pseudothreshold for one weight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdPair {
    pub t: f64,
    pub zeta: f64,
}

impl ThresholdPair {
    pub fn of_weight(prior: &PriorSpec, w: Weight) -> Result<Self> {
        Ok(ThresholdPair {
            t: threshold_of_weight(prior, w)?,
            zeta: pseudothreshold_of_weight(prior, w)?,
        })
    }
}

/// `ln((1 − w) + w g(x)/φ(x))`, the log of the mixture-to-null density ratio.
pub(crate) fn ln_mixture_ratio(ln_ratio: f64, w: f64) -> f64 {
    if w >= 1.0 {
        ln_ratio
    } else {
        ln_add_exp((1.0 - w).ln(), w.ln() + ln_ratio)
    }
}

/// `P(μ ≠ 0 | X = x)`.
pub fn posterior_nonzero_prob(prior: &PriorSpec, w: Weight, x: f64) -> f64 {
    let w = w.get();
    if w >= 1.0 {
        return 1.0;
    }
    let ln_odds = w.ln() - (1.0 - w).ln() + prior.ln_ratio(x);
    1.0 / (1.0 + (-ln_odds).exp())
}

/// `P(μ > m | X = x)` for `m ≥ 0`.
pub fn posterior_upper_tail(prior: &PriorSpec, w: Weight, x: f64, m: f64) -> f64 {
    let ln_den = ln_mixture_ratio(prior.ln_ratio(x), w.get());
    (w.get().ln() + prior.ln_upper_mass_ratio(x, m) - ln_den).exp()
}

/// Posterior median of `μ` given `X = x`, found by bisection on the
/// posterior survival function.
pub fn posterior_median(prior: &PriorSpec, w: Weight, x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let ax = x.abs();
    // P(μ > m | x) as a function of m; its 1/2-crossing is the median
    let ln_den = ln_mixture_ratio(prior.ln_ratio(ax), w.get());
    let ln_w = w.get().ln();
    let excess = |m: f64| (ln_w + prior.ln_upper_mass_ratio(ax, m) - ln_den).exp() - 0.5;
    if excess(0.0) <= 0.0 {
        return 0.0;
    }
    // the median never exceeds |x|; widen if rounding says otherwise
    let mut hi = ax;
    while excess(hi) > 0.0 {
        hi = 2.0 * hi + 1.0;
    }
    let m = solve::bisect(excess, 0.0, hi, SOLVE_TOL).expect("posterior tail is monotone in m");
    m.copysign(x)
}

/// Posterior mean `w̃(x, w) · (x + (log g)'(x))`.
pub fn posterior_mean(prior: &PriorSpec, w: Weight, x: f64) -> f64 {
    posterior_nonzero_prob(prior, w, x) * (x + prior.log_marginal_derivative(x))
}

/// Threshold `t(w)` of the posterior median rule: the `t ≥ 0` with
/// `1/w = 1 + (g₊(t) − g₋(t))/φ(t)`.
pub fn threshold_of_weight(prior: &PriorSpec, w: Weight) -> Result<f64> {
    let w = w.get();
    if w >= 1.0 {
        return Ok(0.0);
    }
    let target = -w.ln();
    solve::bisect_increasing_from(|t| prior.ln_one_plus_halves_gap(t) - target, 0.0, SOLVE_TOL)
}

/// Inverse of [`threshold_of_weight`], explicit in `t`.
pub fn weight_of_threshold(prior: &PriorSpec, t: f64) -> Result<Weight> {
    if t.is_nan() || t < 0.0 {
        return Err(Error::InvalidParameter(format!("threshold must be non-negative, got {t}")));
    }
    Weight::new((-prior.ln_one_plus_halves_gap(t)).exp())
}

/// Pseudothreshold `ζ(w) = β⁻¹(1/w)` on the positive axis.
pub fn pseudothreshold_of_weight(prior: &PriorSpec, w: Weight) -> Result<f64> {
    let target = (1.0 + 1.0 / w.get()).ln();
    solve::bisect_increasing_from(|x| prior.ln_ratio(x) - target, 0.0, SOLVE_TOL)
}

/// Keeps `x` when `|x| ≥ t`.
pub fn hard_threshold(x: f64, t: f64) -> f64 {
    if x.abs() >= t {
        x
    } else {
        0.0
    }
}

/// `sign(x) (|x| − t)₊`.
pub fn soft_threshold(x: f64, t: f64) -> f64 {
    let shrunk = x.abs() - t;
    if shrunk > 0.0 {
        shrunk.copysign(x)
    } else {
        0.0
    }
}
