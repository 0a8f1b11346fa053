//! C ABI over the `ebthresh` library.
//!
//! Every function returns an [`EbtStatus`]; results come back through out
//! pointers. After a non-OK status, [`ebt_last_error_message`] describes the
//! failure on the calling thread. Estimators are opaque handles created by
//! [`ebt_estimator_new`] and released with [`ebt_estimator_free`]. Panics
//! never cross the boundary: they are caught and reported as
//! `EBT_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ebthresh::mml::{self, Cutover, EstimatorConfig, ModifiedThreshold, Rule, ScaleBounds, ScalePolicy};
use ebthresh::{competitors, posterior, Error, ErrorClass, PriorSpec, Weight};

/// Outcome of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EbtStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParameter = 2,
    DataError = 3,
    NumericalError = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EbtPrior {
    Laplace = 0,
    QuasiCauchy = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EbtRule {
    PosteriorMedian = 0,
    PosteriorMean = 1,
    Hard = 2,
    Soft = 3,
}

/// Estimator settings. Start from [`ebt_config_default`] and override fields.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct EbtConfig {
    pub prior: EbtPrior,
    /// Laplace scale; ignored for the quasi-Cauchy prior.
    pub scale: f64,
    /// Fit the Laplace scale jointly with the weight.
    pub estimate_scale: bool,
    pub rule: EbtRule,
    /// Exponent `A` of the very-sparse modification; negative disables it.
    pub modified_exponent: f64,
    /// When positive, the modification fires once `t̂ ≥ f·√(2 log n)`;
    /// otherwise the default cutover is used.
    pub cutover_fraction: f64,
    /// Noise standard deviation used to standardise the data.
    pub noise_sd: f64,
}

/// Fitted quantities reported by [`ebt_estimate`].
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct EbtFit {
    pub w_hat: f64,
    /// Laplace scale in force (fitted or fixed); NaN for the quasi-Cauchy prior.
    pub a_hat: f64,
    pub t_hat: f64,
    pub zeta_hat: f64,
    /// Threshold actually applied, on the standardised scale.
    pub threshold_applied: f64,
    pub at_lower_boundary: bool,
    pub at_upper_boundary: bool,
    pub modification_applied: bool,
}

/// Opaque estimator handle.
pub struct EbtEstimator {
    config: EstimatorConfig,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn clear_last_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

fn status_of(e: &Error) -> EbtStatus {
    match e.class() {
        ErrorClass::Usage => EbtStatus::InvalidParameter,
        ErrorClass::Data => EbtStatus::DataError,
        ErrorClass::Numerical => EbtStatus::NumericalError,
    }
}

/// Runs `f`, converting errors and panics into a status plus message.
fn guard<F>(f: F) -> EbtStatus
where
    F: FnOnce() -> Result<(), (EbtStatus, String)>,
{
    clear_last_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => EbtStatus::Ok,
        Ok(Err((status, message))) => {
            set_last_error(message);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("internal panic: {msg}"));
            EbtStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (EbtStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (EbtStatus, String) {
    (EbtStatus::NullPointer, format!("{what} is null"))
}

fn prior_of(prior: EbtPrior, scale: f64) -> Result<PriorSpec, Error> {
    match prior {
        EbtPrior::Laplace => PriorSpec::laplace(scale),
        EbtPrior::QuasiCauchy => Ok(PriorSpec::QuasiCauchy),
    }
}

fn config_of(c: &EbtConfig) -> Result<EstimatorConfig, Error> {
    let prior = prior_of(c.prior, c.scale)?;
    let scale = if c.estimate_scale { ScalePolicy::Mml(ScaleBounds::default()) } else { ScalePolicy::Fixed };
    let rule = match c.rule {
        EbtRule::PosteriorMedian => Rule::PosteriorMedian,
        EbtRule::PosteriorMean => Rule::PosteriorMean,
        EbtRule::Hard => Rule::Hard,
        EbtRule::Soft => Rule::Soft,
    };
    let modified = (c.modified_exponent >= 0.0).then_some(ModifiedThreshold {
        exponent: c.modified_exponent,
        cutover: if c.cutover_fraction > 0.0 { Cutover::FractionOfUniversal(c.cutover_fraction) } else { Cutover::SparseBoundary },
    });
    let config = EstimatorConfig { prior, scale, rule, modified, noise_sd: c.noise_sd };
    config.validate()?;
    Ok(config)
}

/// Laplace prior with scale ½, fixed scale, posterior median, no
/// modification, unit noise.
#[no_mangle]
pub extern "C" fn ebt_config_default() -> EbtConfig {
    EbtConfig {
        prior: EbtPrior::Laplace,
        scale: 0.5,
        estimate_scale: false,
        rule: EbtRule::PosteriorMedian,
        modified_exponent: -1.0,
        cutover_fraction: 0.0,
        noise_sd: 1.0,
    }
}

/// Message for the last failed call on this thread, or NULL. The pointer is
/// valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn ebt_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ebt_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Validates `config` and creates an estimator in `*out`.
///
/// # Safety
/// `config` must point to a valid `EbtConfig` and `out` to writable storage
/// for a pointer.
#[no_mangle]
pub unsafe extern "C" fn ebt_estimator_new(config: *const EbtConfig, out: *mut *mut EbtEstimator) -> EbtStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = ptr::null_mut();
        let c = config.as_ref().ok_or_else(|| null("config"))?;
        let config = config_of(c).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(EbtEstimator { config }));
        Ok(())
    })
}

/// Releases an estimator. NULL is ignored.
///
/// # Safety
/// `estimator` must be NULL or a handle from [`ebt_estimator_new`] that has
/// not been freed.
#[no_mangle]
pub unsafe extern "C" fn ebt_estimator_free(estimator: *mut EbtEstimator) {
    if !estimator.is_null() {
        drop(Box::from_raw(estimator));
    }
}

/// Denoises `n` values from `data` into `out_values` (length `n`, may alias
/// `data`) and optionally reports the fit in `out_fit`.
///
/// # Safety
/// `data` and `out_values` must point to `n` readable / writable doubles;
/// `out_fit` must be NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn ebt_estimate(
    estimator: *const EbtEstimator,
    data: *const f64,
    n: usize,
    out_values: *mut f64,
    out_fit: *mut EbtFit,
) -> EbtStatus {
    guard(|| {
        let est = estimator.as_ref().ok_or_else(|| null("estimator"))?;
        if data.is_null() {
            return Err(null("data"));
        }
        if out_values.is_null() {
            return Err(null("out_values"));
        }
        let input = std::slice::from_raw_parts(data, n).to_vec();
        let result = mml::ebayes_estimate(&input, &est.config).map_err(lib_err)?;
        std::slice::from_raw_parts_mut(out_values, n).copy_from_slice(&result.values);
        if let Some(fit) = out_fit.as_mut() {
            let f = &result.fit;
            *fit = EbtFit {
                w_hat: f.w_hat.get(),
                a_hat: f.a_hat.or(f.prior.scale()).unwrap_or(f64::NAN),
                t_hat: f.t_hat,
                zeta_hat: f.zeta_hat,
                threshold_applied: result.threshold,
                at_lower_boundary: f.at_lower_boundary,
                at_upper_boundary: f.at_upper_boundary,
                modification_applied: result.modification_applied,
            };
        }
        Ok(())
    })
}

/// `√(2 log n)`; fails for `n < 2`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ebt_universal_threshold(n: usize, out: *mut f64) -> EbtStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = competitors::universal_threshold(n).map_err(lib_err)?;
        Ok(())
    })
}

/// Threshold `t(w)` of the posterior median for weight `w ∈ (0, 1]`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ebt_threshold_of_weight(prior: EbtPrior, scale: f64, w: f64, out: *mut f64) -> EbtStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let p = prior_of(prior, scale).map_err(lib_err)?;
        let w = Weight::new(w).map_err(lib_err)?;
        *out = posterior::threshold_of_weight(&p, w).map_err(lib_err)?;
        Ok(())
    })
}

/// Posterior median of `μ` given one observation `x`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ebt_posterior_median(prior: EbtPrior, scale: f64, w: f64, x: f64, out: *mut f64) -> EbtStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let p = prior_of(prior, scale).map_err(lib_err)?;
        let w = Weight::new(w).map_err(lib_err)?;
        if !x.is_finite() {
            return Err(lib_err(Error::NonFinite { index: 0, value: x }));
        }
        *out = posterior::posterior_median(&p, w, x);
        Ok(())
    })
}
