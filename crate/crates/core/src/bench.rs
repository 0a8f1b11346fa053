//! Monte Carlo comparison of thresholding methods on sparse spike signals.
//!
//! A grid cell is a sparsity level `K` and spike height `μ₀`. In replication
//! `r` every cell draws its spike positions from a seed derived from
//! `(master_seed, r)` and its noise from stream `r` of `master_seed`, and every
//! method in that cell sees the same `(μ, x)` pair. Work units are evaluated
//! in parallel but collected in a fixed order, so results do not depend on
//! the thread count.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::competitors::{self, FdrConfig};
use crate::error::{Error, Result};
use crate::mml::{self, Cutover, ModifiedThreshold, Rule, ScaleBounds, WeightEstimate};
use crate::posterior;
use crate::prior::PriorSpec;
use crate::signal::{self, Pattern, SignalSpec};

/// `n⁻¹ Σ |μ̂_i − μ_i|^q` for one realisation.
pub fn risk_q(estimate: &[f64], truth: &[f64], q: f64) -> Result<f64> {
    if estimate.len() != truth.len() {
        return Err(Error::LengthMismatch { left: estimate.len(), right: truth.len() });
    }
    if !(q > 0.0 && q <= 2.0) {
        return Err(Error::InvalidParameter(format!("loss exponent must lie in (0, 2], got {q}")));
    }
    if truth.is_empty() {
        return Err(Error::TooFewObservations { needed: 1, got: 0 });
    }
    let sum: f64 = estimate.iter().zip(truth).map(|(e, t)| (e - t).abs().powf(q)).sum();
    Ok(sum / truth.len() as f64)
}

/// `Σ (μ̂_i − μ_i)²`, not divided by `n`.
pub fn total_sq_error(estimate: &[f64], truth: &[f64]) -> Result<f64> {
    if estimate.len() != truth.len() {
        return Err(Error::LengthMismatch { left: estimate.len(), right: truth.len() });
    }
    Ok(estimate.iter().zip(truth).map(|(e, t)| (e - t) * (e - t)).sum())
}

/// The estimators compared by the harness.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Method {
    /// Laplace slab, scale and weight fitted, posterior median.
    Exponential,
    /// Quasi-Cauchy slab, posterior median.
    Cauchy,
    /// Laplace slab, scale and weight fitted, posterior mean.
    Postmean,
    /// Laplace slab, scale and weight fitted, hard thresholding at `t̂`.
    Exphard,
    /// Laplace slab of fixed scale, posterior median.
    LaplaceFixed { scale: f64 },
    /// Soft thresholding at the SURE threshold.
    Sure,
    /// Soft thresholding at the hybrid SURE threshold.
    Adapt,
    /// Hard thresholding at the FDR threshold.
    Fdr { q: f64 },
    UniversalSoft,
    UniversalHard,
    /// [`Method::Exponential`] switched to hard thresholding at
    /// `t_A = √(2(1+A) log n)` once `t̂ ≥ f·√(2 log n)`.
    Modified { exponent: f64, fraction: f64 },
}

impl Method {
    /// The fifteen methods of the standard comparison table, in display order.
    pub fn standard_set() -> Vec<Method> {
        vec![
            Method::Exponential,
            Method::Cauchy,
            Method::Postmean,
            Method::Exphard,
            Method::LaplaceFixed { scale: 1.0 },
            Method::LaplaceFixed { scale: 0.5 },
            Method::LaplaceFixed { scale: 0.2 },
            Method::LaplaceFixed { scale: 0.1 },
            Method::Sure,
            Method::Adapt,
            Method::Fdr { q: 0.01 },
            Method::Fdr { q: 0.1 },
            Method::Fdr { q: 0.4 },
            Method::UniversalSoft,
            Method::UniversalHard,
        ]
    }

    /// Modification with `A = 1` and a 95% cutover.
    pub const MODIFIED_DEFAULT: Method = Method::Modified { exponent: 1.0, fraction: 0.95 };

    pub fn name(&self) -> String {
        self.to_string()
    }

    fn validate(&self) -> Result<()> {
        match *self {
            Method::LaplaceFixed { scale } => PriorSpec::laplace(scale).map(|_| ()),
            Method::Fdr { q } => FdrConfig::new(q).map(|_| ()),
            Method::Modified { exponent, fraction } => {
                if exponent >= 0.0 && exponent.is_finite() && fraction > 0.0 && fraction.is_finite() {
                    Ok(())
                } else {
                    Err(Error::InvalidParameter(format!("bad modification A={exponent}, f={fraction}")))
                }
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Exponential => write!(f, "exponential"),
            Method::Cauchy => write!(f, "cauchy"),
            Method::Postmean => write!(f, "postmean"),
            Method::Exphard => write!(f, "exphard"),
            Method::LaplaceFixed { scale } => write!(f, "a={scale}"),
            Method::Sure => write!(f, "sure"),
            Method::Adapt => write!(f, "adapt"),
            Method::Fdr { q } => write!(f, "fdr={q}"),
            Method::UniversalSoft => write!(f, "universal_soft"),
            Method::UniversalHard => write!(f, "universal_hard"),
            Method::Modified { exponent, fraction } => write!(f, "modified={exponent}/{fraction}"),
        }
    }
}

impl FromStr for Method {
    type Err = Error;

    /// Accepts the names produced by `Display`; `modified` alone means
    /// `A = 1`, 95% cutover.
    fn from_str(s: &str) -> Result<Method> {
        let s = s.trim();
        let bad = || Error::InvalidParameter(format!("unknown method '{s}'"));
        let num = |v: &str| v.trim().parse::<f64>().map_err(|_| bad());
        let m = match s {
            "exponential" => Method::Exponential,
            "cauchy" => Method::Cauchy,
            "postmean" => Method::Postmean,
            "exphard" => Method::Exphard,
            "sure" => Method::Sure,
            "adapt" => Method::Adapt,
            "universal_soft" => Method::UniversalSoft,
            "universal_hard" => Method::UniversalHard,
            "modified" => Method::MODIFIED_DEFAULT,
            _ => {
                if let Some(v) = s.strip_prefix("a=") {
                    Method::LaplaceFixed { scale: num(v)? }
                } else if let Some(v) = s.strip_prefix("fdr=") {
                    Method::Fdr { q: num(v)? }
                } else if let Some(v) = s.strip_prefix("modified=") {
                    let (a, f) = v.split_once('/').ok_or_else(bad)?;
                    Method::Modified { exponent: num(a)?, fraction: num(f)? }
                } else {
                    return Err(bad());
                }
            }
        };
        m.validate()?;
        Ok(m)
    }
}

/// Per-replication state shared by all methods: the Laplace fit with fitted
/// scale is computed at most once.
struct Replication<'a> {
    x: &'a [f64],
    laplace_mml: Option<WeightEstimate>,
}

impl<'a> Replication<'a> {
    fn laplace_fit(&mut self) -> Result<&WeightEstimate> {
        if self.laplace_mml.is_none() {
            self.laplace_mml = Some(mml::estimate_weight_scale(self.x, ScaleBounds::default())?);
        }
        Ok(self.laplace_mml.as_ref().expect("fit stored above"))
    }
}

/// Estimate and threshold applied by `method` on unit-variance data.
fn run_method(method: Method, rep: &mut Replication<'_>) -> Result<(Vec<f64>, f64)> {
    let x = rep.x;
    let n = x.len();
    let hard = |t: f64| x.iter().map(|&v| posterior::hard_threshold(v, t)).collect::<Vec<_>>();
    let soft = |t: f64| x.iter().map(|&v| posterior::soft_threshold(v, t)).collect::<Vec<_>>();
    let eb = |rule: Rule, fit: &WeightEstimate, m: Option<&ModifiedThreshold>| -> Result<(Vec<f64>, f64)> {
        let (values, t, _) = mml::apply_rule(rule, fit, m, x)?;
        Ok((values, t))
    };
    match method {
        Method::Exponential => eb(Rule::PosteriorMedian, rep.laplace_fit()?, None),
        Method::Postmean => eb(Rule::PosteriorMean, rep.laplace_fit()?, None),
        Method::Exphard => eb(Rule::Hard, rep.laplace_fit()?, None),
        Method::Modified { exponent, fraction } => {
            let m = ModifiedThreshold { exponent, cutover: Cutover::FractionOfUniversal(fraction) };
            eb(Rule::PosteriorMedian, rep.laplace_fit()?, Some(&m))
        }
        Method::Cauchy => eb(Rule::PosteriorMedian, &mml::estimate_weight(&PriorSpec::QuasiCauchy, x)?, None),
        Method::LaplaceFixed { scale } => {
            eb(Rule::PosteriorMedian, &mml::estimate_weight(&PriorSpec::laplace(scale)?, x)?, None)
        }
        Method::Sure => {
            let t = competitors::sure_threshold(x)?.t;
            Ok((soft(t), t))
        }
        Method::Adapt => {
            let t = competitors::sure_hybrid_threshold(x)?.t;
            Ok((soft(t), t))
        }
        Method::Fdr { q } => {
            let t = competitors::fdr_threshold(x, &FdrConfig::new(q)?)?.t;
            Ok((hard(t), t))
        }
        Method::UniversalSoft => {
            let t = competitors::universal_threshold(n)?;
            Ok((soft(t), t))
        }
        Method::UniversalHard => {
            let t = competitors::universal_threshold(n)?;
            Ok((hard(t), t))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchGrid {
    pub n: usize,
    pub k_values: Vec<usize>,
    pub mu0_values: Vec<f64>,
    pub methods: Vec<Method>,
    pub replications: usize,
    pub master_seed: u64,
    /// Method against which paired standard errors are reported.
    pub baseline: Option<Method>,
}

pub const DEFAULT_MASTER_SEED: u64 = 20_040_801;

impl Default for BenchGrid {
    /// `n = 1000`, `K ∈ {5, 50, 500}`, `μ₀ ∈ {3, 4, 5, 7}`, 100 replications,
    /// all standard methods.
    fn default() -> Self {
        BenchGrid {
            n: 1000,
            k_values: vec![5, 50, 500],
            mu0_values: vec![3.0, 4.0, 5.0, 7.0],
            methods: Method::standard_set(),
            replications: 100,
            master_seed: DEFAULT_MASTER_SEED,
            baseline: Some(Method::Exponential),
        }
    }
}

impl BenchGrid {
    pub fn validate(&self) -> Result<()> {
        if self.replications == 0 {
            return Err(Error::InvalidParameter("need at least one replication".into()));
        }
        if self.n < 2 {
            return Err(Error::TooFewObservations { needed: 2, got: self.n });
        }
        if self.k_values.is_empty() || self.mu0_values.is_empty() || self.methods.is_empty() {
            return Err(Error::InvalidParameter("grid needs at least one K, one μ₀ and one method".into()));
        }
        if let Some(&k) = self.k_values.iter().find(|&&k| k > self.n) {
            return Err(Error::InvalidParameter(format!("K = {k} exceeds n = {}", self.n)));
        }
        if let Some(v) = self.mu0_values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!("spike height {v} is not finite")));
        }
        for m in &self.methods {
            m.validate()?;
        }
        Ok(())
    }

    fn cells(&self) -> Vec<(usize, f64)> {
        self.k_values.iter().flat_map(|&k| self.mu0_values.iter().map(move |&mu0| (k, mu0))).collect()
    }
}

/// SplitMix64 finaliser, used to derive independent seeds.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for the spike positions of replication `r`.
pub fn signal_seed(master_seed: u64, r: usize) -> u64 {
    mix(master_seed ^ mix(r as u64))
}

/// The `(μ, x)` pair of replication `r` in cell `(k, μ₀)`.
pub fn replication_data(n: usize, k: usize, mu0: f64, master_seed: u64, r: usize) -> Result<signal::NoisyRealization> {
    let spec = SignalSpec { n, pattern: Pattern::SpikesAtValue { k, mu0 }, seed: signal_seed(master_seed, r) };
    let mu = signal::gen_signal(&spec)?;
    Ok(signal::add_noise(&mu, master_seed, r as u64))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodResult {
    pub method: Method,
    pub name: String,
    /// Total squared error per replication; `None` where the method failed.
    pub errors: Vec<Option<f64>>,
    pub thresholds: Vec<Option<f64>>,
    /// Replications that succeeded.
    pub reps: usize,
    pub failures: usize,
    pub mean: f64,
    /// Sample standard deviation over `√reps`.
    pub se: f64,
    /// Standard error of the paired difference from the baseline method.
    pub se_vs_baseline: Option<f64>,
    pub mean_threshold: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub k: usize,
    pub mu0: f64,
    pub methods: Vec<MethodResult>,
}

impl CellResult {
    pub fn get(&self, method: &Method) -> Option<&MethodResult> {
        self.methods.iter().find(|m| &m.method == method)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchResult {
    pub grid: BenchGrid,
    pub cells: Vec<CellResult>,
}

impl BenchResult {
    pub fn cell(&self, k: usize, mu0: f64) -> Option<&CellResult> {
        self.cells.iter().find(|c| c.k == k && c.mu0 == mu0)
    }
}

/// Mean and standard error of the mean.
pub fn mean_se(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n < 2 {
        return (mean, f64::NAN);
    }
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    (mean, (ss / (n - 1) as f64).sqrt() / (n as f64).sqrt())
}

fn summarise(method: Method, outcomes: Vec<Option<(f64, f64)>>, baseline: Option<&[Option<(f64, f64)>]>) -> MethodResult {
    let errors: Vec<Option<f64>> = outcomes.iter().map(|o| o.map(|(e, _)| e)).collect();
    let thresholds: Vec<Option<f64>> = outcomes.iter().map(|o| o.map(|(_, t)| t)).collect();
    let ok: Vec<f64> = errors.iter().flatten().copied().collect();
    let (mean, se) = mean_se(&ok);
    let ts: Vec<f64> = thresholds.iter().flatten().copied().collect();
    let mean_threshold = mean_se(&ts).0;
    let se_vs_baseline = baseline.map(|b| {
        let diffs: Vec<f64> = errors
            .iter()
            .zip(b)
            .filter_map(|(e, b)| Some(e.as_ref()? - b.as_ref()?.0))
            .collect();
        mean_se(&diffs).1
    });
    MethodResult {
        method,
        name: method.name(),
        reps: ok.len(),
        failures: errors.len() - ok.len(),
        errors,
        thresholds,
        mean,
        se,
        se_vs_baseline,
        mean_threshold,
    }
}

/// Runs every method on every replication of every cell.
pub fn run_benchmark(grid: &BenchGrid) -> Result<BenchResult> {
    grid.validate()?;
    let cells = grid.cells();
    let units: Vec<(usize, usize)> = (0..cells.len()).flat_map(|c| (0..grid.replications).map(move |r| (c, r))).collect();
    // outcomes[unit][method]
    let outcomes: Vec<Vec<Option<(f64, f64)>>> = units
        .par_iter()
        .map(|&(c, r)| {
            let (k, mu0) = cells[c];
            let data = match replication_data(grid.n, k, mu0, grid.master_seed, r) {
                Ok(d) => d,
                Err(_) => return vec![None; grid.methods.len()],
            };
            let mut rep = Replication { x: &data.x, laplace_mml: None };
            grid.methods
                .iter()
                .map(|&m| {
                    let (est, t) = run_method(m, &mut rep).ok()?;
                    Some((total_sq_error(&est, &data.mu).ok()?, t))
                })
                .collect()
        })
        .collect();

    let reps = grid.replications;
    let cells = cells
        .iter()
        .enumerate()
        .map(|(c, &(k, mu0))| {
            let rows = &outcomes[c * reps..(c + 1) * reps];
            let column = |j: usize| rows.iter().map(|row| row[j]).collect::<Vec<_>>();
            let baseline = grid.baseline.and_then(|b| grid.methods.iter().position(|m| *m == b)).map(column);
            let methods = grid
                .methods
                .iter()
                .enumerate()
                .map(|(j, &m)| summarise(m, column(j), baseline.as_deref()))
                .collect();
            CellResult { k, mu0, methods }
        })
        .collect();
    Ok(BenchResult { grid: grid.clone(), cells })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InefficiencyRow {
    pub name: String,
    /// `100 × (mean / min over methods − 1)` for each cell, in grid order.
    pub per_cell: Vec<f64>,
    pub median: f64,
    pub mean: f64,
    /// Tenth value in increasing order (the third largest of twelve).
    pub tenth: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InefficiencyTable {
    pub rows: Vec<InefficiencyRow>,
}

impl InefficiencyTable {
    pub fn row(&self, name: &str) -> Option<&InefficiencyRow> {
        self.rows.iter().find(|r| r.name == name)
    }
}

fn median(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

/// Inefficiency of each method relative to the best method in each cell,
/// summarised across cells. The "tenth" summary is the tenth smallest value,
/// or the largest when there are fewer than ten cells.
pub fn inefficiency_table(result: &BenchResult) -> Result<InefficiencyTable> {
    if result.cells.is_empty() || result.grid.methods.len() < 2 {
        return Err(Error::InvalidParameter("inefficiencies need at least one cell and two methods".into()));
    }
    let best: Vec<f64> = result
        .cells
        .iter()
        .map(|c| c.methods.iter().map(|m| m.mean).filter(|v| v.is_finite()).fold(f64::INFINITY, f64::min))
        .collect();
    let rows = result
        .grid
        .methods
        .iter()
        .enumerate()
        .map(|(j, m)| {
            let per_cell: Vec<f64> =
                result.cells.iter().zip(&best).map(|(c, &b)| 100.0 * (c.methods[j].mean / b - 1.0)).collect();
            let mut sorted = per_cell.clone();
            sorted.sort_by(f64::total_cmp);
            InefficiencyRow {
                name: m.name(),
                median: median(&sorted),
                mean: sorted.iter().sum::<f64>() / sorted.len() as f64,
                tenth: sorted[sorted.len().min(10) - 1],
                max: *sorted.last().expect("at least one cell"),
                per_cell,
            }
        })
        .collect();
    Ok(InefficiencyTable { rows })
}

/// One sparsity level of the threshold-tracking experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrackingLevel {
    pub nonzero: usize,
    pub eb_threshold: f64,
    pub oracle_threshold: f64,
    pub eb_error: f64,
    pub oracle_error: f64,
    /// `(t, average squared error)` over the grid, including `eb_threshold`.
    pub curve: Vec<(f64, f64)>,
}

/// Laplace scale used when tracking the threshold against sparsity.
pub const TRACKING_SCALE: f64 = 0.5;

/// For each sparsity level, draws `level` uniform(−5, 5) spikes among `n`
/// positions, adds noise and compares the hard threshold chosen by marginal
/// maximum likelihood with the best threshold on a grid over
/// `[0, √(2 log n)]` that also contains the chosen threshold.
pub fn threshold_tracking_sweep(n: usize, levels: &[usize], seed: u64) -> Result<Vec<TrackingLevel>> {
    let base_grid = signal::default_grid(n)?;
    let prior = PriorSpec::laplace(TRACKING_SCALE)?;
    levels
        .par_iter()
        .enumerate()
        .map(|(i, &level)| {
            let spec = SignalSpec {
                n,
                pattern: Pattern::UniformSpikes { k: level, lo: -5.0, hi: 5.0 },
                seed: signal_seed(seed, i),
            };
            let mu = signal::gen_signal(&spec)?;
            let data = signal::add_noise(&mu, seed, 0);
            let fit = mml::estimate_weight(&prior, &data.x)?;
            let eb_threshold = fit.t_hat;
            let mut grid = base_grid.clone();
            let pos = grid.partition_point(|&t| t < eb_threshold);
            if grid.get(pos) != Some(&eb_threshold) {
                grid.insert(pos, eb_threshold);
            }
            let sweep = signal::oracle_threshold_sweep(&data.mu, &data.x, &grid)?;
            Ok(TrackingLevel {
                nonzero: level,
                eb_threshold,
                oracle_threshold: sweep.best_t,
                eb_error: signal::hard_threshold_mse(&data.mu, &data.x, eb_threshold),
                oracle_error: sweep.best_error,
                curve: sweep.curve,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModifiedCell {
    pub k: usize,
    pub mu0: f64,
    pub unmodified: f64,
    pub unmodified_se: f64,
    pub modified: f64,
    pub modified_se: f64,
    /// Standard error of the paired difference.
    pub difference_se: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModifiedComparison {
    pub method: Method,
    pub cells: Vec<ModifiedCell>,
}

/// Fitted-scale Laplace posterior median with and without the sparse-signal
/// modification, on the standard grid plus a single spike of height 10.
pub fn modified_estimator_experiment(seed: u64, replications: usize) -> Result<ModifiedComparison> {
    let method = Method::MODIFIED_DEFAULT;
    let standard = BenchGrid {
        methods: vec![Method::Exponential, method],
        replications,
        master_seed: seed,
        baseline: Some(Method::Exponential),
        ..BenchGrid::default()
    };
    let single = BenchGrid { k_values: vec![1], mu0_values: vec![10.0], ..standard.clone() };
    let mut cells = Vec::new();
    for grid in [standard, single] {
        for c in run_benchmark(&grid)?.cells {
            let (u, m) = (&c.methods[0], &c.methods[1]);
            cells.push(ModifiedCell {
                k: c.k,
                mu0: c.mu0,
                unmodified: u.mean,
                unmodified_se: u.se,
                modified: m.mean,
                modified_se: m.se,
                difference_se: m.se_vs_baseline.unwrap_or(f64::NAN),
            });
        }
    }
    Ok(ModifiedComparison { method, cells })
}

/// Long format: one row per cell and method.
pub fn write_result_csv<W: std::io::Write>(result: &BenchResult, mut out: W) -> Result<()> {
    writeln!(out, "k,mu0,method,mean,se,reps,failures,se_vs_baseline,mean_threshold")?;
    for c in &result.cells {
        for m in &c.methods {
            let base = m.se_vs_baseline.map(|v| v.to_string()).unwrap_or_default();
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                c.k, c.mu0, m.name, m.mean, m.se, m.reps, m.failures, base, m.mean_threshold
            )?;
        }
    }
    Ok(())
}

/// Wide format: one row per method, one column per cell, rounded means.
pub fn write_table_csv<W: std::io::Write>(result: &BenchResult, mut out: W) -> Result<()> {
    let header: Vec<String> = result.cells.iter().map(|c| format!("K{}_mu{}", c.k, c.mu0)).collect();
    writeln!(out, "method,{}", header.join(","))?;
    for (j, m) in result.grid.methods.iter().enumerate() {
        let vals: Vec<String> = result.cells.iter().map(|c| format!("{:.0}", c.methods[j].mean)).collect();
        writeln!(out, "{},{}", m.name(), vals.join(","))?;
    }
    Ok(())
}

pub fn write_inefficiency_csv<W: std::io::Write>(table: &InefficiencyTable, mut out: W) -> Result<()> {
    writeln!(out, "method,median,mean,tenth,max")?;
    for r in &table.rows {
        writeln!(out, "{},{:.0},{:.0},{:.0},{:.0}", r.name, r.median, r.mean, r.tenth, r.max)?;
    }
    Ok(())
}

pub fn write_tracking_csv<W: std::io::Write>(levels: &[TrackingLevel], mut out: W) -> Result<()> {
    writeln!(out, "sparsity,eb_t,oracle_t,eb_err,oracle_err")?;
    for l in levels {
        writeln!(out, "{},{},{},{},{}", l.nonzero, l.eb_threshold, l.oracle_threshold, l.eb_error, l.oracle_error)?;
    }
    Ok(())
}
