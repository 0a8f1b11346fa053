//! Bracketing root finders for the monotone equations in this crate.

use crate::error::{Error, Result};

pub const MAX_ITER: usize = 200;

/// Bisection for a sign change of `f` on `[lo, hi]`. Works for increasing or
/// decreasing `f`; stops once the bracket is narrower than `tol` or an exact
/// zero is hit.
pub fn bisect<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64> {
    let f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() || f_lo.is_nan() || f_hi.is_nan() {
        return Err(Error::NotBracketed { lo, hi });
    }
    let lo_negative = f_lo < 0.0;
    for _ in 0..MAX_ITER {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol || mid <= lo || mid >= hi {
            return Ok(mid);
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if (fm < 0.0) == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Root of an increasing `f` on `[lo, ∞)` with `f(lo) ≤ 0`: the upper end is
/// doubled until it brackets, then bisected.
pub fn bisect_increasing_from<F: FnMut(f64) -> f64>(mut f: F, lo: f64, tol: f64) -> Result<f64> {
    let mut hi = lo.abs().max(1.0);
    let mut expansions = 0;
    while f(hi) < 0.0 {
        hi *= 2.0;
        expansions += 1;
        if expansions > 60 {
            return Err(Error::NotBracketed { lo, hi });
        }
    }
    bisect(f, lo, hi, tol)
}
