#![allow(clippy::excessive_precision)]
//! Adaptive Gauss–Kronrod quadrature, used as an independent check on the
//! closed-form densities and posterior masses.

use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::normal;
use crate::prior::PriorSpec;

// 15-point Kronrod abscissae (non-negative half) and weights, with the
// embedded 7-point Gauss weights at the odd positions.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

const MAX_INTERVALS: usize = 5_000;
/// Absolute tolerance on every oracle integral.
pub const ABS_TOL: f64 = 1e-12;
pub const REL_TOL: f64 = 1e-13;

struct Piece {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Piece {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kron += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Piece {
        a,
        b,
        value: kron * half,
        error: ((kron - gauss) * half).abs(),
    }
}

/// Globally adaptive integral of `f` over `[a, b]` split at `breaks`.
/// Converged when the summed error estimate is below
/// `min(ABS_TOL, REL_TOL·|I|)` (floored at the smallest normal double).
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, breaks: &[f64]) -> Result<f64> {
    let mut points = vec![a];
    points.extend(breaks.iter().copied().filter(|&p| p > a && p < b));
    points.push(b);
    points.sort_by(f64::total_cmp);
    points.dedup();

    let mut heap: BinaryHeap<Piece> = points.windows(2).map(|w| kronrod(&f, w[0], w[1])).collect();
    loop {
        let total: f64 = heap.iter().map(|p| p.value).sum();
        let err: f64 = heap.iter().map(|p| p.error).sum();
        let tol = ABS_TOL.min(REL_TOL * total.abs()).max(f64::MIN_POSITIVE);
        if err <= tol {
            return Ok(total);
        }
        if heap.len() >= MAX_INTERVALS {
            return Err(Error::QuadratureDidNotConverge { estimate: err, intervals: heap.len() });
        }
        let worst = heap.pop().expect("non-empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // cannot split further in floating point
            return Err(Error::QuadratureDidNotConverge { estimate: err, intervals: heap.len() + 1 });
        }
        heap.push(kronrod(&f, worst.a, mid));
        heap.push(kronrod(&f, mid, worst.b));
    }
}

// φ(x − u) is below 1e-300 once |u − x| > 37.
const WINDOW: f64 = 40.0;

/// `∫ φ(x − u) γ(u) du` by adaptive quadrature.
pub fn marginal_density_quadrature(prior: &PriorSpec, x: f64) -> Result<f64> {
    integrate(
        |u| normal::pdf(x - u) * prior.gamma_density(u),
        x - WINDOW,
        x + WINDOW,
        &[0.0, x],
    )
}

/// `∫_m^∞ φ(x − u) γ(u) du` by adaptive quadrature.
pub fn upper_mass_quadrature(prior: &PriorSpec, x: f64, m: f64) -> Result<f64> {
    let hi = x.max(m) + WINDOW;
    integrate(|u| normal::pdf(x - u) * prior.gamma_density(u), m, hi, &[0.0, x])
}

/// `∫ u φ(x − u) γ(u) du`, the unnormalised nonzero-part posterior mean.
pub fn first_moment_quadrature(prior: &PriorSpec, x: f64) -> Result<f64> {
    integrate(
        |u| u * normal::pdf(x - u) * prior.gamma_density(u),
        x - WINDOW,
        x + WINDOW,
        &[0.0, x],
    )
}

/// The quasi-Cauchy slab density from its defining Beta(½, 1) scale mixture,
/// after substituting `s = √(1 − θ)` to remove the endpoint singularity.
pub fn quasi_cauchy_density_quadrature(u: f64) -> Result<f64> {
    let c = 2.0 / (8.0 * std::f64::consts::PI).sqrt();
    integrate(
        |s: f64| {
            if s <= 0.0 {
                0.0
            } else {
                c * (-u * u * (1.0 - s * s) / (2.0 * s * s)).exp()
            }
        },
        0.0,
        1.0,
        &[0.5, 0.9, 0.99],
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_polynomials_and_exponentials() {
        let v = integrate(|x| x * x, 0.0, 3.0, &[]).unwrap();
        assert!((v - 9.0).abs() < 1e-13);
        let v = integrate(f64::exp, 0.0, 1.0, &[]).unwrap();
        assert!((v - (1f64.exp() - 1.0)).abs() < 1e-13);
        let v = integrate(normal::pdf, -40.0, 40.0, &[0.0]).unwrap();
        assert!((v - 1.0).abs() < 1e-13);
    }

    #[test]
    fn slab_densities_integrate_to_one() {
        for p in [PriorSpec::laplace(0.5).unwrap(), PriorSpec::laplace(2.0).unwrap()] {
            let v = integrate(|u| p.gamma_density(u), -200.0, 200.0, &[0.0]).unwrap();
            assert!((v - 1.0).abs() < 1e-12);
        }
        // quasi-Cauchy tail beyond L carries mass ≈ 2/(√(2π) L)
        let l = 1e4;
        let v = integrate(|u| PriorSpec::QuasiCauchy.gamma_density(u), -l, l, &[0.0, -10.0, 10.0, -100.0, 100.0]).unwrap();
        let tail = 2.0 * normal::FRAC_1_SQRT_2PI / l;
        assert!((v + tail - 1.0).abs() < 1e-6, "{v}");
    }

    #[test]
    fn marginal_quadrature_is_positive_far_out() {
        let p = PriorSpec::laplace(0.5).unwrap();
        let v = marginal_density_quadrature(&p, 10.0).unwrap();
        assert!(v.is_finite() && v > 0.0);
    }

    #[test]
    fn non_convergence_is_reported() {
        let r = integrate(|x: f64| 1.0 / x.abs().sqrt().max(1e-300) * (1.0 / x).sin(), -1.0, 1.0, &[]);
        assert!(matches!(r, Err(Error::QuadratureDidNotConverge { .. })));
    }
}
