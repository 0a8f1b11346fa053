//! Slab densities for the spike-and-slab prior and their Gaussian convolutions.
//!
//! Two slabs are supported:
//!
//! * Laplace with scale `a`: `γ(u) = (a/2) e^{−a|u|}`.
//! * Quasi-Cauchy: `μ | θ ~ N(0, 1/θ − 1)` with `θ ~ Beta(½, 1)`, whose
//!   tails decay like `u⁻²`.
//!
//! Everything downstream works with the likelihood ratio `g/φ` in log form.
//! For the Laplace slab
//!
//! ```text
//! g(x)/φ(x) = (a/2) [M(a − x) + M(a + x)]
//! ```
//!
//! with `M` the Mills ratio, and for the quasi-Cauchy slab
//!
//! ```text
//! g(x)/φ(x) = (e^{x²/2} − 1) / x².
//! ```
//!
//! Posterior tail masses `∫_m^∞ φ(x − u) γ(u) du / φ(x)` have closed forms of
//! the same kind; see [`PriorSpec::ln_upper_mass_ratio`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::normal::{self, ln_mills, mills, FRAC_1_SQRT_2PI, LN_SQRT_2PI};

/// The slab density `γ` in force.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PriorSpec {
    Laplace { scale: f64 },
    QuasiCauchy,
}

// Below this |x| the quasi-Cauchy tail-mass bracket is summed as a series.
const QC_SERIES_CUTOFF: f64 = 0.05;

impl PriorSpec {
    pub fn laplace(scale: f64) -> Result<Self> {
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "Laplace scale must be positive and finite, got {scale}"
            )));
        }
        Ok(PriorSpec::Laplace { scale })
    }

    pub fn quasi_cauchy() -> Self {
        PriorSpec::QuasiCauchy
    }

    pub fn scale(&self) -> Option<f64> {
        match *self {
            PriorSpec::Laplace { scale } => Some(scale),
            PriorSpec::QuasiCauchy => None,
        }
    }

    /// Bound on `|(log γ)'|`, which also bounds `|(log g)'|`.
    /// `None` for the quasi-Cauchy slab, whose log-derivative bound is not
    /// used anywhere in the crate.
    pub fn log_derivative_bound(&self) -> Option<f64> {
        self.scale()
    }

    /// The slab density `γ(u)`.
    pub fn gamma_density(&self, u: f64) -> f64 {
        match *self {
            PriorSpec::Laplace { scale } => 0.5 * scale * (-scale * u.abs()).exp(),
            PriorSpec::QuasiCauchy => {
                // γ(u) = (1 − |u| M(|u|)) / √(2π); for large |u| the
                // difference is taken inside the continued fraction.
                let u = u.abs();
                if u < 3.0 {
                    FRAC_1_SQRT_2PI * (1.0 - u * mills(u))
                } else {
                    let c = normal::tail_fraction(u, 2.0);
                    FRAC_1_SQRT_2PI * c / (u + c)
                }
            }
        }
    }

    /// `ln(g(x)/φ(x))`, stable for any finite `x`.
    pub fn ln_ratio(&self, x: f64) -> f64 {
        match *self {
            PriorSpec::Laplace { scale } => {
                (0.5 * scale).ln() + normal::ln_add_exp(ln_mills(scale - x), ln_mills(scale + x))
            }
            PriorSpec::QuasiCauchy => {
                let h = 0.5 * x * x;
                if h < 1e-300 {
                    0.5f64.ln()
                } else if h < 1.0 {
                    (h.exp_m1() / (x * x)).ln()
                } else {
                    h + (-(-h).exp()).ln_1p() - 2.0 * x.abs().ln()
                }
            }
        }
    }

    /// The marginal density `g = γ ⋆ φ`.
    pub fn marginal_density(&self, x: f64) -> f64 {
        (self.ln_ratio(x) + normal::ln_pdf(x)).exp()
    }

    /// `β(x) = g(x)/φ(x) − 1`. Returns `+∞` once `g/φ` leaves the `f64`
    /// range (around `|x| ≈ 38`); [`PriorSpec::ln_ratio`] stays finite.
    pub fn beta(&self, x: f64) -> f64 {
        self.ln_ratio(x).exp_m1()
    }

    /// `β(x, w) = β(x) / (1 + wβ(x))`, finite for all `x`.
    pub fn beta_w(&self, x: f64, w: f64) -> f64 {
        beta_w_from_ln_ratio(self.ln_ratio(x), w)
    }

    /// `(log g)'(x)`.
    pub fn log_marginal_derivative(&self, x: f64) -> f64 {
        match *self {
            PriorSpec::Laplace { scale } => {
                let lp = ln_mills(scale - x);
                let lq = ln_mills(scale + x);
                // a (q − p)/(q + p)
                scale * (0.5 * (lq - lp)).tanh()
            }
            PriorSpec::QuasiCauchy => {
                if x.abs() < 0.1 {
                    let x2 = x * x;
                    x * (-0.5 + x2 / 24.0 - x2 * x2 * x2 / 5760.0)
                } else {
                    x / (0.5 * x * x).exp_m1() - 2.0 / x
                }
            }
        }
    }

    /// `ln(∫_m^∞ φ(x − u) γ(u) du / φ(x))` for `m ≥ 0` and any `x`.
    ///
    /// At `m = 0` this is `ln(g₊(x)/φ(x))`, the positive half of the ratio.
    pub fn ln_upper_mass_ratio(&self, x: f64, m: f64) -> f64 {
        debug_assert!(m >= 0.0);
        match *self {
            PriorSpec::Laplace { scale } => {
                // completing the square: (a/2) M(m − z) e^{mz − m²/2}, z = x − a
                let z = x - scale;
                (0.5 * scale).ln() + ln_mills(m - z) + m * z - 0.5 * m * m
            }
            PriorSpec::QuasiCauchy => {
                -LN_SQRT_2PI + x * m - 0.5 * m * m + qc_ln_bracket_over_x2(x, m)
            }
        }
    }

    /// `(g₊(t) − g₋(t))/φ(t)`, the increasing function whose level sets give
    /// the posterior median threshold. Returned as `ln(1 + ·)`.
    pub(crate) fn ln_one_plus_halves_gap(&self, t: f64) -> f64 {
        let t = t.abs();
        let ln_plus = self.ln_upper_mass_ratio(t, 0.0);
        let minus = self.ln_upper_mass_ratio(-t, 0.0).exp();
        if ln_plus > 30.0 {
            ln_plus + ((1.0 - minus) * (-ln_plus).exp()).ln_1p()
        } else {
            (1.0 + ln_plus.exp() - minus).ln()
        }
    }
}

/// `β(x, w)` from `ln(g/φ)` without forming `β` itself.
pub(crate) fn beta_w_from_ln_ratio(ln_ratio: f64, w: f64) -> f64 {
    if ln_ratio > 0.0 {
        // divide through by r = g/φ
        let inv = (-ln_ratio).exp();
        (1.0 - inv) / ((1.0 - w) * inv + w)
    } else {
        let beta = ln_ratio.exp_m1();
        beta / (1.0 + w * beta)
    }
}

/// `ln(B(m, x)/x²)` where
/// `B = M(m − x) − x + (mx − 1) M(m)` is the quasi-Cauchy upper-mass bracket.
fn qc_ln_bracket_over_x2(x: f64, m: f64) -> f64 {
    if x.abs() < QC_SERIES_CUTOFF {
        // B = Σ_{k≥2} (−x)^k M^{(k)}(m)/k!, with M^{(k+1)} = m M^{(k)} + k M^{(k−1)}
        let mut d_prev = mills(m);
        let mut d_cur = m * d_prev - 1.0;
        let mut sum = 0.0;
        let mut pow = 1.0; // (−x)^{k−2}
        let mut fact = 1.0; // k!
        for k in 1..12 {
            let d_next = m * d_cur + k as f64 * d_prev;
            d_prev = d_cur;
            d_cur = d_next;
            let order = k + 1;
            fact *= order as f64;
            sum += pow * d_cur / fact;
            pow *= -x;
        }
        return sum.ln();
    }
    let ln_lead = ln_mills(m - x);
    let rest = -x + (m * x - 1.0) * mills(m);
    let ln_b = if ln_lead > 30.0 {
        ln_lead + (rest * (-ln_lead).exp()).ln_1p()
    } else {
        (ln_lead.exp() + rest).ln()
    };
    ln_b - 2.0 * x.abs().ln()
}
