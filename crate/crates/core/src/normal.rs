//! Standard normal density, distribution and tail functions.
//!
//! The Mills ratio `M(x) = Φ̃(x) / φ(x)` is the workhorse for every prior in
//! this crate: the ratio `g/φ` and all posterior tail masses reduce to it, so
//! it is evaluated without ever forming `e^{x²/2}` explicitly. For large
//! positive arguments a continued fraction replaces the `erfc` route.

use libm::erfc;
use statrs::function::erf::erfc_inv;

/// `ln √(2π)`.
pub const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
/// `1 / √(2π)`.
pub const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

const SQRT_2: f64 = std::f64::consts::SQRT_2;

// Above this the continued fraction converges in a few dozen terms.
const CF_SWITCH: f64 = 8.0;

pub fn pdf(x: f64) -> f64 {
    FRAC_1_SQRT_2PI * (-0.5 * x * x).exp()
}

pub fn ln_pdf(x: f64) -> f64 {
    -0.5 * x * x - LN_SQRT_2PI
}

pub fn cdf(x: f64) -> f64 {
    0.5 * erfc(-x / SQRT_2)
}

/// Upper tail `Φ̃(x) = 1 − Φ(x)`, accurate in both tails.
pub fn sf(x: f64) -> f64 {
    0.5 * erfc(x / SQRT_2)
}

/// Upper-tail quantile: the `z` with `Φ̃(z) = p`.
pub fn isf(p: f64) -> f64 {
    let z = SQRT_2 * erfc_inv(2.0 * p);
    if !z.is_finite() {
        return z;
    }
    // one Newton step against the accurate tail polishes the inverse
    z + (sf(z) - p) / pdf(z)
}

/// Evaluates `1/(x + s/(x + (s+1)/(x + (s+2)/(x + ...))))` by modified Lentz.
pub(crate) fn tail_fraction(x: f64, start: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut f = TINY;
    let mut c = f;
    let mut d = 0.0;
    let mut a = 1.0;
    for j in 0..10_000 {
        d = x + a * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = x + a / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
        a = start + j as f64;
    }
    f
}

/// Mills ratio `Φ̃(x)/φ(x)`. Overflows to `+∞` only for `x < −37.5`;
/// use [`ln_mills`] there.
pub fn mills(x: f64) -> f64 {
    if x >= CF_SWITCH {
        tail_fraction(x, 1.0)
    } else {
        sf(x) / pdf(x)
    }
}

/// `ln(Φ̃(x)/φ(x))`, finite for every finite `x`.
pub fn ln_mills(x: f64) -> f64 {
    if x >= CF_SWITCH {
        tail_fraction(x, 1.0).ln()
    } else if x >= 0.0 {
        (sf(x) / pdf(x)).ln()
    } else {
        // Φ̃(x) = Φ(|x|) close to one; φ(x) may underflow
        (-sf(-x)).ln_1p() + 0.5 * x * x + LN_SQRT_2PI
    }
}

/// `ln(e^a + e^b)`.
pub(crate) fn ln_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cdf_and_sf_are_complementary() {
        for i in -80..=80 {
            let x = i as f64 * 0.1;
            assert!((cdf(x) + sf(x) - 1.0).abs() < 1e-15, "x = {x}");
        }
    }

    #[test]
    fn mills_matches_direct_ratio() {
        for i in -160..=160 {
            let x = i as f64 * 0.05;
            let direct = sf(x) / pdf(x);
            let m = mills(x);
            assert!(((m - direct) / direct).abs() < 1e-10, "x = {x}: {m} vs {direct}");
        }
    }

    #[test]
    fn continued_fraction_agrees_with_erfc_route() {
        for i in 0..=60 {
            let x = 5.0 + i as f64 * 0.5;
            let cf = tail_fraction(x, 1.0);
            let direct = sf(x) / pdf(x);
            assert!(((cf - direct) / direct).abs() < 1e-12, "x = {x}: {cf} vs {direct}");
        }
    }

    #[test]
    fn ln_mills_is_finite_far_into_both_tails() {
        for &x in &[-60.0, -40.0, -38.0, 0.0, 38.0, 60.0, 1e4] {
            assert!(ln_mills(x).is_finite(), "x = {x}");
        }
        // M(x) ~ 1/x for large x
        assert!((ln_mills(1e4) + 1e4f64.ln()).abs() < 1e-8);
        // M(-x) ~ √(2π) e^{x²/2}
        assert!((ln_mills(-40.0) - (800.0 + LN_SQRT_2PI)).abs() < 1e-12);
    }

    #[test]
    fn quantile_inverts_tail() {
        for &p in &[0.5, 0.05, 0.0125, 1e-4, 5e-6] {
            assert!(((sf(isf(p)) - p) / p).abs() < 1e-10);
        }
        assert!((isf(0.05) - 1.644_853_626_951_472_2).abs() < 1e-12);
    }
}
