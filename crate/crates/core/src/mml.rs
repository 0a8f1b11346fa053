//! Marginal maximum likelihood choice of the mixing weight (and optionally
//! the Laplace scale), and the end-to-end estimator built on it.
//!
//! The weight is constrained so that its posterior-median threshold never
//! exceeds the universal threshold `√(2 log n)`; write `w_n` for the weight
//! at which equality holds. The marginal log-likelihood is concave in `w`,
//! with derivative the score `S(w) = Σ β(X_i, w)`, so the fitted weight is
//! the root of `S` on `[w_n, 1]` or the endpoint towards which `S` points.

use serde::{Deserialize, Serialize};

use crate::competitors::universal_threshold;
use crate::error::{Error, Result};
use crate::normal;
use crate::posterior::{self, Weight};
use crate::prior::PriorSpec;
use crate::solve;

/// Per-observation likelihood-ratio terms for one prior, so that the score
/// and log-likelihood can be evaluated at many weights cheaply.
#[derive(Debug, Clone)]
pub struct ScoreTerms {
    ln_ratio: Vec<f64>,
    beta: Vec<f64>,
    ln_null: f64,
}

impl ScoreTerms {
    pub fn new(prior: &PriorSpec, data: &[f64]) -> Self {
        let ln_ratio: Vec<f64> = data.iter().map(|&x| prior.ln_ratio(x)).collect();
        let beta = ln_ratio.iter().map(|&l| l.exp_m1()).collect();
        let ln_null = data.iter().map(|&x| normal::ln_pdf(x)).sum();
        ScoreTerms { ln_ratio, beta, ln_null }
    }

    pub fn len(&self) -> usize {
        self.beta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.beta.is_empty()
    }

    /// `S(w) = Σ β_i / (1 + w β_i)`.
    pub fn score(&self, w: f64) -> f64 {
        self.beta
            .iter()
            .map(|&b| if b.is_finite() { b / (1.0 + w * b) } else { 1.0 / w })
            .sum()
    }

    /// `ℓ(w) = Σ log{(1 − w) φ(X_i) + w g(X_i)}`.
    pub fn log_likelihood(&self, w: f64) -> f64 {
        let mixture: f64 = self
            .beta
            .iter()
            .zip(&self.ln_ratio)
            .map(|(&b, &l)| if b.is_finite() { (w * b).ln_1p() } else { w.ln() + l })
            .sum();
        self.ln_null + mixture
    }
}

/// Outcome of a marginal maximum likelihood fit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightEstimate {
    /// Prior in force, including the fitted scale when one was estimated.
    pub prior: PriorSpec,
    pub w_hat: Weight,
    pub a_hat: Option<f64>,
    pub t_hat: f64,
    pub zeta_hat: f64,
    /// `ŵ = w_n`: the threshold is pinned at `√(2 log n)`.
    pub at_lower_boundary: bool,
    /// `ŵ = 1`: threshold zero.
    pub at_upper_boundary: bool,
    pub log_likelihood: f64,
}

fn check_data(data: &[f64]) -> Result<()> {
    if data.len() < 2 {
        return Err(Error::TooFewObservations { needed: 2, got: data.len() });
    }
    if let Some((index, &value)) = data.iter().enumerate().find(|(_, v)| !v.is_finite()) {
        return Err(Error::NonFinite { index, value });
    }
    Ok(())
}

/// Weight whose posterior-median threshold equals `√(2 log n)`.
pub fn constraint_weight(prior: &PriorSpec, n: usize) -> Result<Weight> {
    posterior::weight_of_threshold(prior, universal_threshold(n)?)
}

/// Score `S(w)` on `data`.
pub fn score(prior: &PriorSpec, w: Weight, data: &[f64]) -> Result<f64> {
    if data.is_empty() {
        return Err(Error::TooFewObservations { needed: 1, got: 0 });
    }
    Ok(ScoreTerms::new(prior, data).score(w.get()))
}

struct WeightFit {
    w: f64,
    lower: bool,
    upper: bool,
}

fn solve_weight(terms: &ScoreTerms, w_lower: f64) -> WeightFit {
    if terms.score(w_lower) <= 0.0 {
        return WeightFit { w: w_lower, lower: true, upper: false };
    }
    if terms.score(1.0) >= 0.0 {
        return WeightFit { w: 1.0, lower: false, upper: true };
    }
    // bisect to floating-point resolution; S is strictly decreasing here
    let w = solve::bisect(|w| terms.score(w), w_lower, 1.0, 0.0).expect("score changes sign on [w_n, 1]");
    WeightFit { w, lower: false, upper: false }
}

fn finish(prior: PriorSpec, terms: &ScoreTerms, fit: WeightFit, n: usize, a_hat: Option<f64>) -> Result<WeightEstimate> {
    let w_hat = Weight::new(fit.w)?;
    let t_hat = if fit.lower {
        universal_threshold(n)?
    } else {
        posterior::threshold_of_weight(&prior, w_hat)?
    };
    Ok(WeightEstimate {
        prior,
        w_hat,
        a_hat,
        t_hat,
        zeta_hat: posterior::pseudothreshold_of_weight(&prior, w_hat)?,
        at_lower_boundary: fit.lower,
        at_upper_boundary: fit.upper,
        log_likelihood: terms.log_likelihood(fit.w),
    })
}

/// Marginal maximum likelihood weight for a fixed prior.
pub fn estimate_weight(prior: &PriorSpec, data: &[f64]) -> Result<WeightEstimate> {
    check_data(data)?;
    let terms = ScoreTerms::new(prior, data);
    let w_n = constraint_weight(prior, data.len())?.get();
    let fit = solve_weight(&terms, w_n);
    finish(*prior, &terms, fit, data.len(), None)
}

/// Search interval for the Laplace scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaleBounds {
    pub lo: f64,
    pub hi: f64,
}

impl Default for ScaleBounds {
    fn default() -> Self {
        ScaleBounds { lo: 0.04, hi: 3.0 }
    }
}

impl ScaleBounds {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && hi >= lo) {
            return Err(Error::InvalidParameter(format!("invalid scale bounds [{lo}, {hi}]")));
        }
        Ok(ScaleBounds { lo, hi })
    }
}

const SCALE_GRID: usize = 20;
const GOLDEN_STEPS: usize = 40;

/// Profile of the likelihood over `w` at one Laplace scale.
struct Profile {
    a: f64,
    ll: f64,
}

fn profile(data: &[f64], a: f64) -> Result<Profile> {
    let prior = PriorSpec::laplace(a)?;
    let terms = ScoreTerms::new(&prior, data);
    let w_n = constraint_weight(&prior, data.len())?.get();
    let fit = solve_weight(&terms, w_n);
    Ok(Profile { a, ll: terms.log_likelihood(fit.w) })
}

/// Joint marginal maximum likelihood over `(w, a)` for the Laplace slab.
///
/// The scale is searched on a fixed log-spaced grid over `bounds`, then
/// refined by golden-section search on the profile likelihood around the
/// best grid point; at each scale the weight is the constrained profile
/// maximiser. Ties go to the smaller scale.
pub fn estimate_weight_scale(data: &[f64], bounds: ScaleBounds) -> Result<WeightEstimate> {
    check_data(data)?;
    let bounds = ScaleBounds::new(bounds.lo, bounds.hi)?;
    let (ln_lo, ln_hi) = (bounds.lo.ln(), bounds.hi.ln());

    let grid: Vec<f64> = if bounds.lo == bounds.hi {
        vec![bounds.lo]
    } else {
        (0..SCALE_GRID)
            .map(|i| (ln_lo + (ln_hi - ln_lo) * i as f64 / (SCALE_GRID - 1) as f64).exp())
            .collect()
    };
    let mut best_idx = 0;
    let mut best = profile(data, grid[0])?;
    for (i, &a) in grid.iter().enumerate().skip(1) {
        let p = profile(data, a)?;
        if p.ll > best.ll {
            best = p;
            best_idx = i;
        }
    }

    if grid.len() > 1 {
        let mut lo = grid[best_idx.saturating_sub(1)].ln();
        let mut hi = grid[(best_idx + 1).min(grid.len() - 1)].ln();
        let inv_phi = 0.5 * (5f64.sqrt() - 1.0);
        let mut c = hi - inv_phi * (hi - lo);
        let mut d = lo + inv_phi * (hi - lo);
        let mut pc = profile(data, c.exp())?;
        let mut pd = profile(data, d.exp())?;
        for _ in 0..GOLDEN_STEPS {
            if pc.ll >= pd.ll {
                hi = d;
                d = c;
                pd = pc;
                c = hi - inv_phi * (hi - lo);
                pc = profile(data, c.exp())?;
            } else {
                lo = c;
                c = d;
                pc = pd;
                d = lo + inv_phi * (hi - lo);
                pd = profile(data, d.exp())?;
            }
        }
        for p in [pc, pd] {
            if p.ll > best.ll {
                best = p;
            }
        }
    }

    let prior = PriorSpec::laplace(best.a)?;
    let terms = ScoreTerms::new(&prior, data);
    let w_n = constraint_weight(&prior, data.len())?.get();
    let fit = solve_weight(&terms, w_n);
    finish(prior, &terms, fit, data.len(), Some(best.a))
}

/// Which estimation rule is applied once the prior has been fitted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    PosteriorMedian,
    PosteriorMean,
    Hard,
    Soft,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScalePolicy {
    /// Use the scale carried by the prior.
    Fixed,
    /// Fit the Laplace scale jointly with the weight.
    Mml(ScaleBounds),
}

/// When the very-sparse modification replaces the fitted threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Cutover {
    /// `t̂ > t_n` with `t_n² = 2 log n − 5 log log n`.
    SparseBoundary,
    /// `t̂ ≥ f · √(2 log n)`.
    FractionOfUniversal(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModifiedThreshold {
    /// Exponent `A ≥ 0` of the raised threshold `t_A = √(2(1+A) log n)`.
    pub exponent: f64,
    pub cutover: Cutover,
}

/// `t_n = √(2 log n − 5 log log n)`.
pub fn sparse_boundary(n: usize) -> Result<f64> {
    if n < 16 {
        return Err(Error::InvalidParameter(format!("modified threshold needs n ≥ 16, got {n}")));
    }
    let ln_n = (n as f64).ln();
    Ok((2.0 * ln_n - 5.0 * ln_n.ln()).sqrt())
}

/// `t_A = √(2(1 + A) log n)`.
pub fn raised_threshold(n: usize, exponent: f64) -> Result<f64> {
    if !(exponent >= 0.0 && exponent.is_finite()) {
        return Err(Error::InvalidParameter(format!("exponent A must be non-negative, got {exponent}")));
    }
    Ok(universal_threshold(n)? * (1.0 + exponent).sqrt())
}

/// The modified threshold: `t̂` when `t̂ ≤ t_n`, otherwise `t_A`.
pub fn modified_threshold(t_hat: f64, n: usize, exponent: f64) -> Result<f64> {
    let m = ModifiedThreshold { exponent, cutover: Cutover::SparseBoundary };
    Ok(apply_modification(t_hat, n, &m)?.0)
}

/// Returns the threshold in force and whether the modification fired.
pub fn apply_modification(t_hat: f64, n: usize, m: &ModifiedThreshold) -> Result<(f64, bool)> {
    let t_a = raised_threshold(n, m.exponent)?;
    let fired = match m.cutover {
        Cutover::SparseBoundary => t_hat > sparse_boundary(n)?,
        Cutover::FractionOfUniversal(f) => {
            if !(f > 0.0 && f.is_finite()) {
                return Err(Error::InvalidParameter(format!("cutover fraction must be positive, got {f}")));
            }
            t_hat >= f * universal_threshold(n)?
        }
    };
    Ok(if fired { (t_a, true) } else { (t_hat, false) })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimatorConfig {
    pub prior: PriorSpec,
    pub scale: ScalePolicy,
    pub rule: Rule,
    pub modified: Option<ModifiedThreshold>,
    pub noise_sd: f64,
}

impl EstimatorConfig {
    pub fn new(prior: PriorSpec, rule: Rule) -> Self {
        EstimatorConfig { prior, scale: ScalePolicy::Fixed, rule, modified: None, noise_sd: 1.0 }
    }

    /// Laplace slab with scale and weight both fitted.
    pub fn laplace_mml(rule: Rule) -> Self {
        EstimatorConfig {
            prior: PriorSpec::Laplace { scale: 0.5 },
            scale: ScalePolicy::Mml(ScaleBounds::default()),
            rule,
            modified: None,
            noise_sd: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let PriorSpec::Laplace { scale } = self.prior {
            PriorSpec::laplace(scale)?;
        }
        if let ScalePolicy::Mml(b) = self.scale {
            if !matches!(self.prior, PriorSpec::Laplace { .. }) {
                return Err(Error::InvalidParameter("scale estimation requires the Laplace prior".into()));
            }
            ScaleBounds::new(b.lo, b.hi)?;
        }
        if let Some(m) = self.modified {
            if !(m.exponent >= 0.0 && m.exponent.is_finite()) {
                return Err(Error::InvalidParameter(format!("exponent A must be non-negative, got {}", m.exponent)));
            }
        }
        if !(self.noise_sd > 0.0 && self.noise_sd.is_finite()) {
            return Err(Error::InvalidParameter(format!("noise sd must be positive, got {}", self.noise_sd)));
        }
        Ok(())
    }

    /// Fits the prior to already-standardised data.
    pub fn fit(&self, standardized: &[f64]) -> Result<WeightEstimate> {
        match self.scale {
            ScalePolicy::Fixed => estimate_weight(&self.prior, standardized),
            ScalePolicy::Mml(bounds) => estimate_weight_scale(standardized, bounds),
        }
    }
}

/// Result of [`ebayes_estimate`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub values: Vec<f64>,
    pub fit: WeightEstimate,
    /// Threshold actually applied, on the standardised scale.
    pub threshold: f64,
    pub modification_applied: bool,
}

/// Applies a rule to standardised data given a fit. A fired modification
/// switches the median, mean and hard rules to hard thresholding at the
/// raised threshold, and the soft rule to soft thresholding there.
pub fn apply_rule(
    rule: Rule,
    fit: &WeightEstimate,
    modified: Option<&ModifiedThreshold>,
    standardized: &[f64],
) -> Result<(Vec<f64>, f64, bool)> {
    let (threshold, fired) = match modified {
        Some(m) => apply_modification(fit.t_hat, standardized.len(), m)?,
        None => (fit.t_hat, false),
    };
    let values = match (rule, fired) {
        (Rule::Soft, _) => standardized.iter().map(|&x| posterior::soft_threshold(x, threshold)).collect(),
        (Rule::Hard, _) | (_, true) => standardized.iter().map(|&x| posterior::hard_threshold(x, threshold)).collect(),
        (Rule::PosteriorMedian, false) => standardized
            .iter()
            .map(|&x| posterior::posterior_median(&fit.prior, fit.w_hat, x))
            .collect(),
        (Rule::PosteriorMean, false) => standardized
            .iter()
            .map(|&x| posterior::posterior_mean(&fit.prior, fit.w_hat, x))
            .collect(),
    };
    Ok((values, threshold, fired))
}

/// Standardise by the noise level, fit by marginal maximum likelihood, apply
/// the configured rule and rescale.
pub fn ebayes_estimate(data: &[f64], config: &EstimatorConfig) -> Result<Estimate> {
    config.validate()?;
    check_data(data)?;
    let sd = config.noise_sd;
    let standardized: Vec<f64> = data.iter().map(|&x| x / sd).collect();
    let fit = config.fit(&standardized)?;
    let (mut values, threshold, fired) = apply_rule(config.rule, &fit, config.modified.as_ref(), &standardized)?;
    for v in &mut values {
        *v *= sd;
    }
    Ok(Estimate { values, fit, threshold, modification_applied: fired })
}
