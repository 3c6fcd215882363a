//! C bindings for the `ww-density` streaming density estimator.
//!
//! Handles are opaque heap allocations owned by the caller and released with
//! the matching `*_free` function. Every fallible call returns a [`WwStatus`]
//! and writes its result through out-pointers; on failure a human-readable
//! message is available from [`ww_last_error`] until the next fallible call
//! on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};

use ww_density::bandwidth::BandwidthPlan;
use ww_density::error::Error;
use ww_density::estimators::GridEstimate;
use ww_density::gls::{self, PsiFunction, TailModel};
use ww_density::grid::{DomainBox, Grid};
use ww_density::kernels::{build_higher_order, KernelSpec};

/// Result code of a fallible binding call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WwStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// An argument was outside its domain.
    InvalidArgument = 2,
    /// Array lengths or dimensions disagree.
    DimensionMismatch = 3,
    /// An internal numeric routine failed to converge.
    Numeric = 4,
    /// The requested miss level cannot be certified by the tail model.
    UnreachableAlpha = 5,
    /// Malformed JSON or a value that fails validation on decode.
    Json = 6,
}

/// Bandwidth schedule handle.
pub struct WwPlan {
    inner: BandwidthPlan,
}

/// Kernel handle.
pub struct WwKernel {
    inner: KernelSpec,
}

/// Streaming estimator handle.
pub struct WwEstimator {
    inner: GridEstimate,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn success() -> WwStatus {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
    WwStatus::Ok
}

fn failure(e: &Error) -> WwStatus {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = CString::new(e.to_string()).ok());
    match e {
        Error::DimensionMismatch { .. } | Error::GridMismatch(_) => WwStatus::DimensionMismatch,
        Error::QuadratureNonConvergence { .. } | Error::SingularMomentSystem { .. } => {
            WwStatus::Numeric
        }
        Error::UnreachableAlpha { .. } => WwStatus::UnreachableAlpha,
        Error::Json(_) => WwStatus::Json,
        _ => WwStatus::InvalidArgument,
    }
}

fn null_pointer() -> WwStatus {
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new("null pointer argument").ok();
    });
    WwStatus::NullPointer
}

/// Message describing the most recent failure on this thread, or null if the
/// most recent fallible call succeeded. The pointer stays valid until the
/// next fallible call on the same thread; do not free it.
#[no_mangle]
pub extern "C" fn ww_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map_or(std::ptr::null(), |msg| msg.as_ptr())
    })
}

/// Version of the underlying library as a static nul-terminated string.
#[no_mangle]
pub extern "C" fn ww_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Create a bandwidth schedule with smoothness `beta`, dimension `dim`, and
/// scale constant `c1`.
///
/// # Safety
///
/// `out` must be a valid pointer; on success it receives a handle that must
/// be released with [`ww_plan_free`].
#[no_mangle]
pub unsafe extern "C" fn ww_plan_new(
    beta: f64,
    dim: u32,
    c1: f64,
    out: *mut *mut WwPlan,
) -> WwStatus {
    if out.is_null() {
        return null_pointer();
    }
    match BandwidthPlan::new(beta, dim, c1) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(WwPlan { inner }));
            success()
        }
        Err(e) => failure(&e),
    }
}

/// Release a plan handle. Null is ignored.
///
/// # Safety
///
/// `plan` must be null or a handle obtained from [`ww_plan_new`] that has not
/// been freed yet.
#[no_mangle]
pub unsafe extern "C" fn ww_plan_free(plan: *mut WwPlan) {
    if !plan.is_null() {
        drop(Box::from_raw(plan));
    }
}

/// Bandwidth used for observation number `k` (1-based).
///
/// # Safety
///
/// `plan` must be a live plan handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ww_plan_bandwidth(
    plan: *const WwPlan,
    k: u64,
    out: *mut f64,
) -> WwStatus {
    if plan.is_null() || out.is_null() {
        return null_pointer();
    }
    match (*plan).inner.bandwidth_at(k) {
        Ok(h) => {
            *out = h;
            success()
        }
        Err(e) => failure(&e),
    }
}

/// Deviation normalizer `B_n` after `n` observations.
///
/// # Safety
///
/// `plan` must be a live plan handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ww_plan_normalizer(
    plan: *const WwPlan,
    n: u64,
    out: *mut f64,
) -> WwStatus {
    if plan.is_null() || out.is_null() {
        return null_pointer();
    }
    match (*plan).inner.normalizer(n) {
        Ok(b) => {
            *out = b;
            success()
        }
        Err(e) => failure(&e),
    }
}

unsafe fn kernel_out(out: *mut *mut WwKernel, inner: KernelSpec) -> WwStatus {
    *out = Box::into_raw(Box::new(WwKernel { inner }));
    success()
}

/// Create the plain Gaussian kernel.
///
/// # Safety
///
/// `out` must be a valid pointer; the handle must be released with
/// [`ww_kernel_free`].
#[no_mangle]
pub unsafe extern "C" fn ww_kernel_gaussian(out: *mut *mut WwKernel) -> WwStatus {
    if out.is_null() {
        return null_pointer();
    }
    kernel_out(out, KernelSpec::gaussian())
}

/// Create the plain Epanechnikov kernel.
///
/// # Safety
///
/// `out` must be a valid pointer; the handle must be released with
/// [`ww_kernel_free`].
#[no_mangle]
pub unsafe extern "C" fn ww_kernel_epanechnikov(out: *mut *mut WwKernel) -> WwStatus {
    if out.is_null() {
        return null_pointer();
    }
    kernel_out(out, KernelSpec::epanechnikov())
}

/// Build the polynomial-modified kernel matching smoothness `beta` on top of
/// `base`.
///
/// # Safety
///
/// `base` must be a live kernel handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ww_kernel_build(
    base: *const WwKernel,
    beta: f64,
    out: *mut *mut WwKernel,
) -> WwStatus {
    if base.is_null() || out.is_null() {
        return null_pointer();
    }
    match build_higher_order(&(*base).inner, beta) {
        Ok(inner) => kernel_out(out, inner),
        Err(e) => failure(&e),
    }
}

/// Decode a kernel from its JSON representation.
///
/// # Safety
///
/// `json` must be a valid nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ww_kernel_from_json(
    json: *const c_char,
    out: *mut *mut WwKernel,
) -> WwStatus {
    if json.is_null() || out.is_null() {
        return null_pointer();
    }
    let Ok(text) = CStr::from_ptr(json).to_str() else {
        return failure(&Error::invalid("kernel JSON is not valid UTF-8"));
    };
    match serde_json::from_str::<KernelSpec>(text) {
        Ok(inner) => kernel_out(out, inner),
        Err(e) => failure(&Error::Json(e)),
    }
}

/// Encode a kernel as JSON. The returned string must be released with
/// [`ww_string_free`].
///
/// # Safety
///
/// `kernel` must be a live kernel handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ww_kernel_to_json(
    kernel: *const WwKernel,
    out: *mut *mut c_char,
) -> WwStatus {
    if kernel.is_null() || out.is_null() {
        return null_pointer();
    }
    let text = match serde_json::to_string(&(*kernel).inner) {
        Ok(t) => t,
        Err(e) => return failure(&Error::Json(e)),
    };
    match CString::new(text) {
        Ok(s) => {
            *out = s.into_raw();
            success()
        }
        Err(_) => failure(&Error::invalid("kernel JSON contains a nul byte")),
    }
}

/// First non-vanishing moment index of the kernel.
///
/// # Safety
///
/// `kernel` must be a live kernel handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ww_kernel_order(kernel: *const WwKernel, out: *mut u32) -> WwStatus {
    if kernel.is_null() || out.is_null() {
        return null_pointer();
    }
    *out = (*kernel).inner.order();
    success()
}

/// Evaluate the one-dimensional kernel profile at `t`.
///
/// # Safety
///
/// `kernel` must be a live kernel handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ww_kernel_eval1(
    kernel: *const WwKernel,
    t: f64,
    out: *mut f64,
) -> WwStatus {
    if kernel.is_null() || out.is_null() {
        return null_pointer();
    }
    *out = (*kernel).inner.eval1(t);
    success()
}

/// Release a kernel handle. Null is ignored.
///
/// # Safety
///
/// `kernel` must be null or a live kernel handle.
#[no_mangle]
pub unsafe extern "C" fn ww_kernel_free(kernel: *mut WwKernel) {
    if !kernel.is_null() {
        drop(Box::from_raw(kernel));
    }
}

/// Release a string returned by this library. Null is ignored.
///
/// # Safety
///
/// `s` must be null or a string obtained from [`ww_kernel_to_json`] that has
/// not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn ww_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Create a streaming estimator on the axis-aligned box `[lo, hi]` sampled
/// with `shape[j]` nodes along axis `j`.
///
/// # Safety
///
/// `plan` and `kernel` must be live handles; `lo`, `hi`, and `shape` must
/// point to `dim` readable elements; `out` must be a valid pointer. The
/// handle must be released with [`ww_estimator_free`].
#[no_mangle]
pub unsafe extern "C" fn ww_estimator_new(
    plan: *const WwPlan,
    kernel: *const WwKernel,
    lo: *const f64,
    hi: *const f64,
    dim: usize,
    shape: *const usize,
    out: *mut *mut WwEstimator,
) -> WwStatus {
    if plan.is_null() || kernel.is_null() || lo.is_null() || hi.is_null() || shape.is_null() || out.is_null()
    {
        return null_pointer();
    }
    let lo = std::slice::from_raw_parts(lo, dim).to_vec();
    let hi = std::slice::from_raw_parts(hi, dim).to_vec();
    let shape = std::slice::from_raw_parts(shape, dim).to_vec();
    let built = DomainBox::new(lo, hi)
        .and_then(|domain| Grid::new(domain, shape))
        .and_then(|grid| GridEstimate::new(grid, (*plan).inner, (*kernel).inner.clone()));
    match built {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(WwEstimator { inner }));
            success()
        }
        Err(e) => failure(&e),
    }
}

/// Fold one observation into the estimate.
///
/// # Safety
///
/// `estimator` must be a live estimator handle and `x` must point to `dim`
/// readable elements.
#[no_mangle]
pub unsafe extern "C" fn ww_estimator_update(
    estimator: *mut WwEstimator,
    x: *const f64,
    dim: usize,
) -> WwStatus {
    if estimator.is_null() || x.is_null() {
        return null_pointer();
    }
    let point = std::slice::from_raw_parts(x, dim);
    match (*estimator).inner.update(point) {
        Ok(()) => success(),
        Err(e) => failure(&e),
    }
}

/// Number of observations folded in so far.
///
/// # Safety
///
/// `estimator` must be a live estimator handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ww_estimator_count(
    estimator: *const WwEstimator,
    out: *mut u64,
) -> WwStatus {
    if estimator.is_null() || out.is_null() {
        return null_pointer();
    }
    *out = (*estimator).inner.count() as u64;
    success()
}

/// Number of grid nodes (the length expected by [`ww_estimator_values`]).
///
/// # Safety
///
/// `estimator` must be a live estimator handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ww_estimator_node_count(
    estimator: *const WwEstimator,
    out: *mut usize,
) -> WwStatus {
    if estimator.is_null() || out.is_null() {
        return null_pointer();
    }
    *out = (*estimator).inner.grid().len();
    success()
}

/// Copy the current node values into `out`, which must hold exactly
/// `ww_estimator_node_count` elements. Nodes are ordered with the last axis
/// varying fastest.
///
/// # Safety
///
/// `estimator` must be a live estimator handle and `out` must point to `len`
/// writable elements.
#[no_mangle]
pub unsafe extern "C" fn ww_estimator_values(
    estimator: *const WwEstimator,
    out: *mut f64,
    len: usize,
) -> WwStatus {
    if estimator.is_null() || out.is_null() {
        return null_pointer();
    }
    let values = (*estimator).inner.values();
    if values.len() != len {
        return failure(&Error::GridMismatch(format!(
            "caller buffer holds {len} values, grid has {}",
            values.len()
        )));
    }
    std::slice::from_raw_parts_mut(out, len).copy_from_slice(values);
    success()
}

/// Deviation normalizer `B_n` for the current observation count.
///
/// # Safety
///
/// `estimator` must be a live estimator handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ww_estimator_normalizer(
    estimator: *const WwEstimator,
    out: *mut f64,
) -> WwStatus {
    if estimator.is_null() || out.is_null() {
        return null_pointer();
    }
    match (*estimator).inner.normalizer() {
        Ok(b) => {
            *out = b;
            success()
        }
        Err(e) => failure(&e),
    }
}

/// Release an estimator handle. Null is ignored.
///
/// # Safety
///
/// `estimator` must be null or a live estimator handle.
#[no_mangle]
pub unsafe extern "C" fn ww_estimator_free(estimator: *mut WwEstimator) {
    if !estimator.is_null() {
        drop(Box::from_raw(estimator));
    }
}

/// Tail envelope profile `nu(z) = exp(-z - ln z * ln ln z)` for `z >= e`.
///
/// # Safety
///
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ww_nu(z: f64, out: *mut f64) -> WwStatus {
    if out.is_null() {
        return null_pointer();
    }
    match gls::nu(z) {
        Ok(v) => {
            *out = v;
            success()
        }
        Err(e) => failure(&e),
    }
}

/// Moment growth gauge `psi(p) = p / ln p` for `p > 1`.
///
/// # Safety
///
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ww_log_ratio(p: f64, out: *mut f64) -> WwStatus {
    if out.is_null() {
        return null_pointer();
    }
    match gls::log_ratio(p) {
        Ok(v) => {
            *out = v;
            success()
        }
        Err(e) => failure(&e),
    }
}

/// Convex conjugate `sup_p [p t - p ln psi(p)]` of the log-ratio gauge over
/// `p` in `[2, p_max]`, writing the supremum and its location.
///
/// # Safety
///
/// `out_value` and `out_maximizer` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn ww_young_fenchel(
    t: f64,
    p_max: f64,
    out_value: *mut f64,
    out_maximizer: *mut f64,
) -> WwStatus {
    if out_value.is_null() || out_maximizer.is_null() {
        return null_pointer();
    }
    match gls::young_fenchel(&PsiFunction::LogRatio, t, p_max) {
        Ok(conj) => {
            *out_value = conj.value;
            *out_maximizer = conj.maximizer;
            success()
        }
        Err(e) => failure(&e),
    }
}

/// Quantile of the calibrated envelope `u -> c * nu(u / s)`: the smallest
/// in-domain level whose bound equals `alpha`.
///
/// # Safety
///
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ww_tail_quantile(
    c: f64,
    s: f64,
    alpha: f64,
    out: *mut f64,
) -> WwStatus {
    if out.is_null() {
        return null_pointer();
    }
    match TailModel::new(c, s).and_then(|m| m.quantile(alpha)) {
        Ok(u) => {
            *out = u;
            success()
        }
        Err(e) => failure(&e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn version_is_a_static_nul_terminated_string() {
        let ptr = ww_version();
        assert!(!ptr.is_null());
        let text = unsafe { CStr::from_ptr(ptr) }.to_str().unwrap();
        assert_eq!(text, env!("CARGO_PKG_VERSION"));
    }

    #[test]
    fn plan_handles_round_trip_and_report_errors() {
        unsafe {
            let mut plan: *mut WwPlan = std::ptr::null_mut();
            assert_eq!(ww_plan_new(2.0, 1, 1.0, &mut plan), WwStatus::Ok);
            assert!(!plan.is_null());
            let mut h = 0.0;
            assert_eq!(ww_plan_bandwidth(plan, 1, &mut h), WwStatus::Ok);
            assert_eq!(h, 1.0);
            assert!(ww_last_error().is_null(), "success clears the message");
            // The schedule identity B_n * h_n = c1 survives the bindings.
            let mut b = 0.0;
            assert_eq!(ww_plan_normalizer(plan, 50, &mut b), WwStatus::Ok);
            assert_eq!(ww_plan_bandwidth(plan, 50, &mut h), WwStatus::Ok);
            assert!((b * h - 1.0).abs() < 1e-14);
            // k = 0 is outside the schedule.
            assert_eq!(ww_plan_bandwidth(plan, 0, &mut h), WwStatus::InvalidArgument);
            let msg = ww_last_error();
            assert!(!msg.is_null());
            assert!(CStr::from_ptr(msg).to_str().unwrap().contains("invalid"));
            ww_plan_free(plan);
            // Invalid construction never allocates.
            let mut bad: *mut WwPlan = std::ptr::null_mut();
            assert_eq!(ww_plan_new(-1.0, 1, 1.0, &mut bad), WwStatus::InvalidArgument);
            assert!(bad.is_null());
        }
    }

    #[test]
    fn estimator_streams_observations() {
        unsafe {
            let mut plan: *mut WwPlan = std::ptr::null_mut();
            let mut kernel: *mut WwKernel = std::ptr::null_mut();
            assert_eq!(ww_plan_new(2.0, 1, 1.0, &mut plan), WwStatus::Ok);
            assert_eq!(ww_kernel_gaussian(&mut kernel), WwStatus::Ok);
            let lo = [-1.0];
            let hi = [1.0];
            let shape = [5usize];
            let mut est: *mut WwEstimator = std::ptr::null_mut();
            assert_eq!(
                ww_estimator_new(plan, kernel, lo.as_ptr(), hi.as_ptr(), 1, shape.as_ptr(), &mut est),
                WwStatus::Ok
            );
            let x = [0.0];
            assert_eq!(ww_estimator_update(est, x.as_ptr(), 1), WwStatus::Ok);
            let mut count = 0u64;
            assert_eq!(ww_estimator_count(est, &mut count), WwStatus::Ok);
            assert_eq!(count, 1);
            let mut nodes = 0usize;
            assert_eq!(ww_estimator_node_count(est, &mut nodes), WwStatus::Ok);
            assert_eq!(nodes, 5);
            let mut values = [0.0f64; 5];
            assert_eq!(ww_estimator_values(est, values.as_mut_ptr(), 5), WwStatus::Ok);
            // One observation at the center with bandwidth 1: the middle node
            // carries the Gaussian peak value.
            assert!((values[2] - 0.3989422804014327).abs() < 1e-15);
            // Wrong buffer length is refused before any write.
            assert_eq!(
                ww_estimator_values(est, values.as_mut_ptr(), 4),
                WwStatus::DimensionMismatch
            );
            // Wrong point dimension is refused.
            let xy = [0.0, 0.0];
            assert_eq!(
                ww_estimator_update(est, xy.as_ptr(), 2),
                WwStatus::DimensionMismatch
            );
            ww_estimator_free(est);
            ww_kernel_free(kernel);
            ww_plan_free(plan);
        }
    }

    #[test]
    fn kernel_json_round_trips_bitwise() {
        unsafe {
            let mut base: *mut WwKernel = std::ptr::null_mut();
            let mut built: *mut WwKernel = std::ptr::null_mut();
            assert_eq!(ww_kernel_gaussian(&mut base), WwStatus::Ok);
            assert_eq!(ww_kernel_build(base, 3.5, &mut built), WwStatus::Ok);
            let mut order = 0u32;
            assert_eq!(ww_kernel_order(built, &mut order), WwStatus::Ok);
            assert_eq!(order, 4);
            let mut json: *mut c_char = std::ptr::null_mut();
            assert_eq!(ww_kernel_to_json(built, &mut json), WwStatus::Ok);
            let mut back: *mut WwKernel = std::ptr::null_mut();
            assert_eq!(ww_kernel_from_json(json, &mut back), WwStatus::Ok);
            let (mut a, mut b) = (0.0, 0.0);
            assert_eq!(ww_kernel_eval1(built, 0.3, &mut a), WwStatus::Ok);
            assert_eq!(ww_kernel_eval1(back, 0.3, &mut b), WwStatus::Ok);
            assert_eq!(a, b, "JSON round trip preserves evaluation exactly");
            ww_string_free(json);
            ww_kernel_free(back);
            ww_kernel_free(built);
            ww_kernel_free(base);
            // Garbage JSON maps to the JSON status.
            let bad = CString::new("{\"base\":42}").unwrap();
            let mut out: *mut WwKernel = std::ptr::null_mut();
            assert_eq!(ww_kernel_from_json(bad.as_ptr(), &mut out), WwStatus::Json);
            assert!(out.is_null());
        }
    }

    #[test]
    fn analysis_functions_match_the_library() {
        unsafe {
            let mut v = 0.0;
            assert_eq!(ww_nu(std::f64::consts::E, &mut v), WwStatus::Ok);
            assert_eq!(v, (-std::f64::consts::E).exp());
            assert_eq!(ww_nu(1.0, &mut v), WwStatus::InvalidArgument);
            assert_eq!(ww_log_ratio(std::f64::consts::E, &mut v), WwStatus::Ok);
            assert_eq!(v, std::f64::consts::E);
            let (mut value, mut maximizer) = (0.0, 0.0);
            assert_eq!(ww_young_fenchel(2.0, 1e6, &mut value, &mut maximizer), WwStatus::Ok);
            let direct = gls::young_fenchel(&PsiFunction::LogRatio, 2.0, 1e6).unwrap();
            assert_eq!(value, direct.value);
            assert_eq!(maximizer, direct.maximizer);
            // Quantile round trip against the library model.
            let model = TailModel::new(1.5, 0.7).unwrap();
            let alpha = 0.5 * 1.5 * gls::nu(std::f64::consts::E).unwrap();
            let mut u = 0.0;
            assert_eq!(ww_tail_quantile(1.5, 0.7, alpha, &mut u), WwStatus::Ok);
            assert_eq!(u, model.quantile(alpha).unwrap());
            // A level above the envelope's edge value is unreachable.
            assert_eq!(ww_tail_quantile(1.5, 0.7, 0.5, &mut u), WwStatus::UnreachableAlpha);
        }
    }

    #[test]
    fn null_arguments_are_rejected() {
        unsafe {
            assert_eq!(ww_plan_new(2.0, 1, 1.0, std::ptr::null_mut()), WwStatus::NullPointer);
            let mut v = 0.0;
            assert_eq!(
                ww_plan_bandwidth(std::ptr::null(), 1, &mut v),
                WwStatus::NullPointer
            );
            assert_eq!(
                ww_kernel_eval1(std::ptr::null(), 0.0, &mut v),
                WwStatus::NullPointer
            );
            assert_eq!(ww_nu(3.0, std::ptr::null_mut()), WwStatus::NullPointer);
            assert!(!ww_last_error().is_null());
            // Frees tolerate null.
            ww_plan_free(std::ptr::null_mut());
            ww_kernel_free(std::ptr::null_mut());
            ww_estimator_free(std::ptr::null_mut());
            ww_string_free(std::ptr::null_mut());
        }
    }

    #[test]
    fn generated_header_declares_the_api() {
        let header = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("include/ww_density.h");
        let text = std::fs::read_to_string(header).expect("build script wrote the header");
        for needle in [
            "WW_DENSITY_H",
            "WwStatus",
            "ww_plan_new",
            "ww_estimator_update",
            "ww_tail_quantile",
            "ww_last_error",
        ] {
            assert!(text.contains(needle), "header is missing {needle}");
        }
    }
}
