//! C ABI over the chronofit curve pipeline.
//!
//! Every entry point returns a [`CfStatus`] and writes results through out
//! pointers. Curves are opaque handles produced by [`cf_fit`],
//! [`cf_curve_from_json`], or one of the curve transforms; release them with
//! [`cf_curve_free`]. Strings allocated by the library must be released with
//! [`cf_string_free`]. The generated C header is committed at
//! `include/chronofit.h`.
//!
//! Panics never unwind across the boundary; a caught panic reports
//! `CF_STATUS_INTERNAL`.

use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use chronofit::distributions::{DistributionParams, Family, SkewNormalParams};
use chronofit::error::Error;
use chronofit::fitting::{
    auc_normalize, fit, proportional_rescale, AnnotationPoint, FitOptions, Normalization,
    ValidityCurve, WorkingDomain,
};
use chronofit::metrics::regression_report;
use chronofit::timescale::{
    compression_row, convert_log_value, convert_params, from_log, to_log, LogBase, LogTime,
};
use chronofit::validity::{interval_probability, peak_minutes, validity_at, IntervalQuery};

/// Status code returned by every entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CfStatus {
    /// Success.
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// Malformed argument: bad base, non-finite value, empty input.
    InvalidArgument = 2,
    /// Input outside the supported domain (for example sub-minute times).
    Domain = 3,
    /// Numerical failure inside the computation.
    Numeric = 4,
    /// Operation not applicable to the value's current state.
    Semantics = 5,
    /// Malformed data payload.
    Data = 6,
    /// I/O failure.
    Io = 7,
    /// A string argument was not valid UTF-8.
    Utf8 = 8,
    /// Internal error (caught panic).
    Internal = 9,
}

/// Density family of a curve.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CfFamily {
    Gaussian = 0,
    Exponential = 1,
    LogNormal = 2,
    Gamma = 3,
    SkewNormal = 4,
}

/// Amplitude calibration of a curve.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CfNormalization {
    /// Amplitude as fitted; no integral or peak guarantee.
    Raw = 0,
    /// Unit integral over the working domain; supports interval queries.
    AucOne = 1,
    /// Unit maximum over the working domain.
    Proportional = 2,
}

/// Flattened regression report. `r2` and `spearman` are meaningless (and set
/// to NaN) when their `_defined` flag is false, which happens on constant
/// inputs.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct CfRegressionReport {
    pub n: usize,
    pub mse: f64,
    pub mae: f64,
    pub r2: f64,
    pub r2_defined: bool,
    pub spearman: f64,
    pub spearman_defined: bool,
    pub nll: f64,
    pub crps: f64,
}

/// Opaque curve handle. Allocate through the library, free with
/// [`cf_curve_free`].
pub struct CfCurve(ValidityCurve);

fn status_of(e: &Error) -> CfStatus {
    match e {
        Error::InvalidArgument(_) => CfStatus::InvalidArgument,
        Error::Domain(_) => CfStatus::Domain,
        Error::Numeric(_) => CfStatus::Numeric,
        Error::Semantics(_) => CfStatus::Semantics,
        Error::Data { .. } => CfStatus::Data,
        Error::Io(_) => CfStatus::Io,
    }
}

fn family_in(f: CfFamily) -> Family {
    match f {
        CfFamily::Gaussian => Family::Gaussian,
        CfFamily::Exponential => Family::Exponential,
        CfFamily::LogNormal => Family::LogNormal,
        CfFamily::Gamma => Family::Gamma,
        CfFamily::SkewNormal => Family::SkewNormal,
    }
}

fn family_out(f: Family) -> CfFamily {
    match f {
        Family::Gaussian => CfFamily::Gaussian,
        Family::Exponential => CfFamily::Exponential,
        Family::LogNormal => CfFamily::LogNormal,
        Family::Gamma => CfFamily::Gamma,
        Family::SkewNormal => CfFamily::SkewNormal,
    }
}

fn normalization_out(n: Normalization) -> CfNormalization {
    match n {
        Normalization::Raw => CfNormalization::Raw,
        Normalization::AucOne => CfNormalization::AucOne,
        Normalization::Proportional => CfNormalization::Proportional,
    }
}

/// Runs a fallible body, translating panics into `CF_STATUS_INTERNAL`.
fn guard(body: impl FnOnce() -> CfStatus) -> CfStatus {
    catch_unwind(AssertUnwindSafe(body)).unwrap_or(CfStatus::Internal)
}

macro_rules! try_ffi {
    ($expr:expr) => {
        match $expr {
            Ok(v) => v,
            Err(e) => return status_of(&e),
        }
    };
}

/// Short, static, NUL-terminated description of a status code.
#[no_mangle]
pub extern "C" fn cf_status_name(status: CfStatus) -> *const c_char {
    let name: &'static [u8] = match status {
        CfStatus::Ok => b"ok\0",
        CfStatus::NullPointer => b"null pointer\0",
        CfStatus::InvalidArgument => b"invalid argument\0",
        CfStatus::Domain => b"domain error\0",
        CfStatus::Numeric => b"numeric error\0",
        CfStatus::Semantics => b"semantics error\0",
        CfStatus::Data => b"data error\0",
        CfStatus::Io => b"io error\0",
        CfStatus::Utf8 => b"invalid utf-8\0",
        CfStatus::Internal => b"internal error\0",
    };
    name.as_ptr().cast()
}

// ------------------------------------------------------------ time scale

/// Maps a time in minutes (>= 1) to the log axis of `base` (> 1).
///
/// # Safety
/// `out` must be a valid pointer to writable memory for one `double`.
#[no_mangle]
pub unsafe extern "C" fn cf_to_log(minutes: f64, base: f64, out: *mut f64) -> CfStatus {
    if out.is_null() {
        return CfStatus::NullPointer;
    }
    guard(|| {
        let b = try_ffi!(LogBase::new(base));
        let t = try_ffi!(to_log(minutes, b));
        unsafe { *out = t.value };
        CfStatus::Ok
    })
}

/// Maps a log-axis value back to minutes.
///
/// # Safety
/// `out` must be a valid pointer to writable memory for one `double`.
#[no_mangle]
pub unsafe extern "C" fn cf_from_log(value: f64, base: f64, out: *mut f64) -> CfStatus {
    if out.is_null() {
        return CfStatus::NullPointer;
    }
    guard(|| {
        let b = try_ffi!(LogBase::new(base));
        let minutes = try_ffi!(from_log(LogTime { value, base: b }));
        unsafe { *out = minutes };
        CfStatus::Ok
    })
}

/// Re-expresses a log-axis position in another base.
///
/// # Safety
/// `out` must be a valid pointer to writable memory for one `double`.
#[no_mangle]
pub unsafe extern "C" fn cf_convert_log_value(
    value: f64,
    from_base: f64,
    to_base: f64,
    out: *mut f64,
) -> CfStatus {
    if out.is_null() {
        return CfStatus::NullPointer;
    }
    guard(|| {
        let from = try_ffi!(LogBase::new(from_base));
        let to = try_ffi!(LogBase::new(to_base));
        let converted = convert_log_value(LogTime { value, base: from }, to);
        unsafe { *out = converted.value };
        CfStatus::Ok
    })
}

/// Converts skew-normal curve parameters between log bases: location and
/// scale are multiplied by ln(from)/ln(to), the shape is unchanged.
///
/// # Safety
/// `out_xi`, `out_omega`, and `out_alpha` must each be a valid pointer to
/// writable memory for one `double`.
#[no_mangle]
pub unsafe extern "C" fn cf_convert_params(
    xi: f64,
    omega: f64,
    alpha: f64,
    from_base: f64,
    to_base: f64,
    out_xi: *mut f64,
    out_omega: *mut f64,
    out_alpha: *mut f64,
) -> CfStatus {
    if out_xi.is_null() || out_omega.is_null() || out_alpha.is_null() {
        return CfStatus::NullPointer;
    }
    guard(|| {
        let from = try_ffi!(LogBase::new(from_base));
        let to = try_ffi!(LogBase::new(to_base));
        let params = try_ffi!(SkewNormalParams::new(xi, omega, alpha));
        let converted = convert_params(params, from, to);
        unsafe {
            *out_xi = converted.xi;
            *out_omega = converted.omega;
            *out_alpha = converted.alpha;
        }
        CfStatus::Ok
    })
}

/// Log value, compression ratio t'/t, and compression percentage for one
/// timestamp.
///
/// # Safety
/// `out_log`, `out_ratio`, and `out_percent` must each be a valid pointer to
/// writable memory for one `double`.
#[no_mangle]
pub unsafe extern "C" fn cf_compression_row(
    minutes: f64,
    base: f64,
    out_log: *mut f64,
    out_ratio: *mut f64,
    out_percent: *mut f64,
) -> CfStatus {
    if out_log.is_null() || out_ratio.is_null() || out_percent.is_null() {
        return CfStatus::NullPointer;
    }
    guard(|| {
        let b = try_ffi!(LogBase::new(base));
        let row = try_ffi!(compression_row(minutes, b));
        unsafe {
            *out_log = row.log_value;
            *out_ratio = row.compression_ratio;
            *out_percent = row.percent;
        }
        CfStatus::Ok
    })
}

// --------------------------------------------------------------- fitting

/// Fits `family` to `len` annotation points (log-axis positions `t_log`,
/// validity `value` in (0, 1]) and returns a curve in the requested
/// normalization. `out_rmse` may be null; when given it receives the fit's
/// root-mean-square residual.
///
/// # Safety
/// `t_log` and `value` must point to `len` readable `double`s each;
/// `out_curve` must be a valid pointer to writable memory for one
/// `CfCurve*`. The returned curve must be freed with [`cf_curve_free`].
#[no_mangle]
pub unsafe extern "C" fn cf_fit(
    t_log: *const f64,
    value: *const f64,
    len: usize,
    family: CfFamily,
    base: f64,
    normalization: CfNormalization,
    out_curve: *mut *mut CfCurve,
    out_rmse: *mut f64,
) -> CfStatus {
    if t_log.is_null() || value.is_null() || out_curve.is_null() {
        return CfStatus::NullPointer;
    }
    guard(|| {
        let xs = unsafe { std::slice::from_raw_parts(t_log, len) };
        let ys = unsafe { std::slice::from_raw_parts(value, len) };
        let mut points = Vec::with_capacity(len);
        for (&x, &y) in xs.iter().zip(ys) {
            points.push(try_ffi!(AnnotationPoint::new(x, y)));
        }
        let options = FitOptions {
            base: try_ffi!(LogBase::new(base)),
            ..FitOptions::default()
        };
        let result = try_ffi!(fit(&points, family_in(family), &options));
        let raw = result.raw_curve(options.base);
        let curve = match normalization {
            CfNormalization::Raw => raw,
            CfNormalization::AucOne | CfNormalization::Proportional => {
                let domain = options.domain.endpoints_in(options.base);
                let auc_one = try_ffi!(auc_normalize(&raw, domain, options.grid_n));
                if normalization == CfNormalization::AucOne {
                    auc_one
                } else {
                    try_ffi!(proportional_rescale(&auc_one))
                }
            }
        };
        unsafe {
            if !out_rmse.is_null() {
                *out_rmse = result.rmse;
            }
            *out_curve = Box::into_raw(Box::new(CfCurve(curve)));
        }
        CfStatus::Ok
    })
}

// ---------------------------------------------------------------- curves

/// Parses a curve from its JSON wire format.
///
/// # Safety
/// `json` must be a valid NUL-terminated string; `out_curve` must be a valid
/// pointer to writable memory for one `CfCurve*`. The returned curve must be
/// freed with [`cf_curve_free`].
#[no_mangle]
pub unsafe extern "C" fn cf_curve_from_json(
    json: *const c_char,
    out_curve: *mut *mut CfCurve,
) -> CfStatus {
    if json.is_null() || out_curve.is_null() {
        return CfStatus::NullPointer;
    }
    guard(|| {
        let text = match unsafe { CStr::from_ptr(json) }.to_str() {
            Ok(t) => t,
            Err(_) => return CfStatus::Utf8,
        };
        let curve = try_ffi!(ValidityCurve::from_json(text));
        unsafe { *out_curve = Box::into_raw(Box::new(CfCurve(curve))) };
        CfStatus::Ok
    })
}

/// Serializes a curve to its JSON wire format. The returned string must be
/// freed with [`cf_string_free`].
///
/// # Safety
/// `curve` must be a live handle from this library; `out_json` must be a
/// valid pointer to writable memory for one `char*`.
#[no_mangle]
pub unsafe extern "C" fn cf_curve_to_json(
    curve: *const CfCurve,
    out_json: *mut *mut c_char,
) -> CfStatus {
    if curve.is_null() || out_json.is_null() {
        return CfStatus::NullPointer;
    }
    guard(|| {
        let json = unsafe { &(*curve).0 }.to_json();
        let c = CString::new(json).expect("curve json has no NUL bytes");
        unsafe { *out_json = c.into_raw() };
        CfStatus::Ok
    })
}

/// Rescales a curve so it integrates to one over the default working domain.
///
/// # Safety
/// `curve` must be a live handle from this library; `out_curve` must be a
/// valid pointer to writable memory for one `CfCurve*`. The returned curve
/// must be freed with [`cf_curve_free`].
#[no_mangle]
pub unsafe extern "C" fn cf_curve_auc_normalize(
    curve: *const CfCurve,
    out_curve: *mut *mut CfCurve,
) -> CfStatus {
    if curve.is_null() || out_curve.is_null() {
        return CfStatus::NullPointer;
    }
    guard(|| {
        let inner = unsafe { &(*curve).0 };
        let domain = WorkingDomain::default().endpoints_in(inner.base);
        let normalized = try_ffi!(auc_normalize(inner, domain, default_grid_n()));
        unsafe { *out_curve = Box::into_raw(Box::new(CfCurve(normalized))) };
        CfStatus::Ok
    })
}

/// Rescales a curve so its maximum over the default working domain is one.
///
/// # Safety
/// Same contract as [`cf_curve_auc_normalize`].
#[no_mangle]
pub unsafe extern "C" fn cf_curve_proportional(
    curve: *const CfCurve,
    out_curve: *mut *mut CfCurve,
) -> CfStatus {
    if curve.is_null() || out_curve.is_null() {
        return CfStatus::NullPointer;
    }
    guard(|| {
        let rescaled = try_ffi!(proportional_rescale(unsafe { &(*curve).0 }));
        unsafe { *out_curve = Box::into_raw(Box::new(CfCurve(rescaled))) };
        CfStatus::Ok
    })
}

/// Re-expresses a curve on the log axis of another base. Location-like and
/// scale-like parameters are rescaled; the shape and the normalization state
/// are preserved.
///
/// # Safety
/// Same contract as [`cf_curve_auc_normalize`].
#[no_mangle]
pub unsafe extern "C" fn cf_curve_convert_base(
    curve: *const CfCurve,
    to_base: f64,
    out_curve: *mut *mut CfCurve,
) -> CfStatus {
    if curve.is_null() || out_curve.is_null() {
        return CfStatus::NullPointer;
    }
    guard(|| {
        let to = try_ffi!(LogBase::new(to_base));
        let converted = unsafe { &(*curve).0 }.convert_base(to);
        unsafe { *out_curve = Box::into_raw(Box::new(CfCurve(converted))) };
        CfStatus::Ok
    })
}

/// Reads a curve's family, parameters, amplitude, base, and normalization.
/// Any out pointer may be null to skip that field. `out_params` receives up
/// to three values in family order: Gaussian (mu, sigma), exponential
/// (lambda), log-normal (mu, sigma), gamma (k, theta), skew-normal (xi,
/// omega, alpha); unused slots are zeroed.
///
/// # Safety
/// `curve` must be a live handle from this library; `out_params`, when
/// non-null, must point to writable memory for three `double`s; the other
/// out pointers, when non-null, must each be valid for one value of their
/// type.
#[no_mangle]
pub unsafe extern "C" fn cf_curve_info(
    curve: *const CfCurve,
    out_family: *mut CfFamily,
    out_params: *mut f64,
    out_scale: *mut f64,
    out_base: *mut f64,
    out_normalization: *mut CfNormalization,
) -> CfStatus {
    if curve.is_null() {
        return CfStatus::NullPointer;
    }
    guard(|| {
        let inner = unsafe { &(*curve).0 };
        unsafe {
            if !out_family.is_null() {
                *out_family = family_out(inner.family());
            }
            if !out_params.is_null() {
                let slots = std::slice::from_raw_parts_mut(out_params, 3);
                slots.fill(0.0);
                match inner.params {
                    DistributionParams::Gaussian { mu, sigma } => {
                        slots[0] = mu;
                        slots[1] = sigma;
                    }
                    DistributionParams::Exponential { lambda } => slots[0] = lambda,
                    DistributionParams::LogNormal { mu, sigma } => {
                        slots[0] = mu;
                        slots[1] = sigma;
                    }
                    DistributionParams::Gamma { k, theta } => {
                        slots[0] = k;
                        slots[1] = theta;
                    }
                    DistributionParams::SkewNormal(p) => {
                        slots[0] = p.xi;
                        slots[1] = p.omega;
                        slots[2] = p.alpha;
                    }
                }
            }
            if !out_scale.is_null() {
                *out_scale = inner.scale;
            }
            if !out_base.is_null() {
                *out_base = inner.base.value();
            }
            if !out_normalization.is_null() {
                *out_normalization = normalization_out(inner.normalization);
            }
        }
        CfStatus::Ok
    })
}

// --------------------------------------------------------------- queries

/// Curve value at a time in minutes.
///
/// # Safety
/// `curve` must be a live handle from this library; `out` must be a valid
/// pointer to writable memory for one `double`.
#[no_mangle]
pub unsafe extern "C" fn cf_validity_at(
    curve: *const CfCurve,
    minutes: f64,
    out: *mut f64,
) -> CfStatus {
    if curve.is_null() || out.is_null() {
        return CfStatus::NullPointer;
    }
    guard(|| {
        let v = try_ffi!(validity_at(unsafe { &(*curve).0 }, minutes));
        unsafe { *out = v };
        CfStatus::Ok
    })
}

/// Probability mass over `[start_minutes, end_minutes]`. The curve must be
/// AUC-normalized; raw and proportional amplitudes are rejected with
/// `CF_STATUS_SEMANTICS`.
///
/// # Safety
/// Same contract as [`cf_validity_at`].
#[no_mangle]
pub unsafe extern "C" fn cf_interval_probability(
    curve: *const CfCurve,
    start_minutes: f64,
    end_minutes: f64,
    out: *mut f64,
) -> CfStatus {
    if curve.is_null() || out.is_null() {
        return CfStatus::NullPointer;
    }
    guard(|| {
        let query = try_ffi!(IntervalQuery::new(start_minutes, end_minutes));
        let mass = try_ffi!(interval_probability(unsafe { &(*curve).0 }, query));
        unsafe { *out = mass };
        CfStatus::Ok
    })
}

/// Time in minutes where the curve attains its maximum over the default
/// working domain.
///
/// # Safety
/// Same contract as [`cf_validity_at`].
#[no_mangle]
pub unsafe extern "C" fn cf_peak_minutes(curve: *const CfCurve, out: *mut f64) -> CfStatus {
    if curve.is_null() || out.is_null() {
        return CfStatus::NullPointer;
    }
    guard(|| {
        let t = try_ffi!(peak_minutes(unsafe { &(*curve).0 }));
        unsafe { *out = t };
        CfStatus::Ok
    })
}

// --------------------------------------------------------------- metrics

/// Evaluates predictions against gold values: MSE, MAE, R2, Spearman, NLL,
/// and CRPS in one pass.
///
/// # Safety
/// `pred` and `gold` must point to `len` readable `double`s each; `out` must
/// be a valid pointer to writable memory for one `CfRegressionReport`.
#[no_mangle]
pub unsafe extern "C" fn cf_regression_report(
    pred: *const f64,
    gold: *const f64,
    len: usize,
    out: *mut CfRegressionReport,
) -> CfStatus {
    if pred.is_null() || gold.is_null() || out.is_null() {
        return CfStatus::NullPointer;
    }
    guard(|| {
        let p = unsafe { std::slice::from_raw_parts(pred, len) };
        let g = unsafe { std::slice::from_raw_parts(gold, len) };
        let report = try_ffi!(regression_report(p, g));
        unsafe {
            *out = CfRegressionReport {
                n: report.n,
                mse: report.mse,
                mae: report.mae,
                r2: report.r2.unwrap_or(f64::NAN),
                r2_defined: report.r2.is_some(),
                spearman: report.spearman.unwrap_or(f64::NAN),
                spearman_defined: report.spearman.is_some(),
                nll: report.nll,
                crps: report.crps,
            };
        }
        CfStatus::Ok
    })
}

// ------------------------------------------------------------ lifecycles

/// Releases a curve handle. Null is a no-op.
///
/// # Safety
/// `curve` must be null or a handle obtained from this library that has not
/// already been freed.
#[no_mangle]
pub unsafe extern "C" fn cf_curve_free(curve: *mut CfCurve) {
    if !curve.is_null() {
        drop(unsafe { Box::from_raw(curve) });
    }
}

/// Releases a string allocated by this library. Null is a no-op.
///
/// # Safety
/// `s` must be null or a string obtained from this library that has not
/// already been freed.
#[no_mangle]
pub unsafe extern "C" fn cf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// The working grid size the transforms use, kept in one place.
fn default_grid_n() -> usize {
    FitOptions::default().grid_n
}
