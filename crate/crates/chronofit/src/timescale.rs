//! Conversion between linear time in minutes and a logarithmic time axis.
//!
//! The log axis maps `t` minutes to `ln(t) / ln(b)` for a configurable base
//! `b > 1`. The default base 1.1 stretches the first hours and compresses
//! years, which matches how annotators reason about how long statements stay
//! valid. One minute maps to zero; sub-minute times are rejected rather than
//! clamped so that callers cannot silently feed negative log values into
//! curves calibrated for `t >= 1`.

use serde::{Deserialize, Serialize};

use crate::distributions::SkewNormalParams;
use crate::error::{Error, Result};

/// Domain floor in minutes. Queries below this are domain errors.
pub const MIN_MINUTES: f64 = 1.0;

/// Base used by the released annotation targets.
pub const DEFAULT_LOG_BASE: f64 = 1.1;

/// A validated logarithm base, strictly greater than one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct LogBase(f64);

impl LogBase {
    /// Validates and wraps a base. Bases at or below 1 have no inverse on
    /// `[1, inf)` and are rejected.
    pub fn new(b: f64) -> Result<Self> {
        if !b.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "log base must be finite, got {b}"
            )));
        }
        if b <= 1.0 {
            return Err(Error::InvalidArgument(format!(
                "log base must be strictly greater than 1, got {b}"
            )));
        }
        Ok(LogBase(b))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Natural log of the base; the scaling constant of this axis.
    pub fn ln(self) -> f64 {
        self.0.ln()
    }
}

impl Default for LogBase {
    fn default() -> Self {
        LogBase(DEFAULT_LOG_BASE)
    }
}

impl TryFrom<f64> for LogBase {
    type Error = Error;

    fn try_from(b: f64) -> Result<Self> {
        LogBase::new(b)
    }
}

impl From<LogBase> for f64 {
    fn from(b: LogBase) -> f64 {
        b.0
    }
}

impl std::fmt::Display for LogBase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A position on the log time axis, tagged with the base it was taken in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogTime {
    pub value: f64,
    pub base: LogBase,
}

/// Maps `t` minutes to `ln(t)/ln(base)`.
///
/// Monotonically increasing in `t`; `to_log(1, b)` is exactly zero for every
/// base.
pub fn to_log(minutes: f64, base: LogBase) -> Result<LogTime> {
    if !minutes.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "time must be finite, got {minutes}"
        )));
    }
    if minutes < MIN_MINUTES {
        return Err(Error::Domain(format!(
            "sub-minute time unsupported: {minutes} min"
        )));
    }
    Ok(LogTime {
        value: minutes.ln() / base.ln(),
        base,
    })
}

/// Inverse of [`to_log`]: returns `base^value` minutes.
///
/// Values below zero are accepted (they denote sub-minute times that
/// [`to_log`] itself can never produce) so that the function is a total
/// inverse on finite inputs.
pub fn from_log(t: LogTime) -> Result<f64> {
    if !t.value.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "log time must be finite, got {}",
            t.value
        )));
    }
    Ok(t.base.value().powf(t.value))
}

/// Re-expresses a log-axis value in another base.
///
/// A time `t` satisfies `value = ln(t)/ln(from)`, so the same instant in base
/// `to` is `value * ln(from)/ln(to)`. Same-base conversion is exact identity.
pub fn convert_log_value(t: LogTime, to: LogBase) -> LogTime {
    if t.base == to {
        return LogTime {
            value: t.value,
            base: to,
        };
    }
    LogTime {
        value: t.value * (t.base.ln() / to.ln()),
        base: to,
    }
}

/// Converts skew-normal curve parameters between log bases.
///
/// Location and scale live on the log axis and pick up the same linear factor
/// as [`convert_log_value`]; the shape parameter is dimensionless and is
/// carried over bit-identically.
pub fn convert_params(params: SkewNormalParams, from: LogBase, to: LogBase) -> SkewNormalParams {
    if from == to {
        return params;
    }
    let factor = from.ln() / to.ln();
    SkewNormalParams {
        xi: params.xi * factor,
        omega: params.omega * factor,
        alpha: params.alpha,
    }
}

/// One row of a compression report: how strongly the log axis shrinks a
/// linear timestamp.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CompressionRow {
    /// Linear time in minutes.
    pub minutes: f64,
    /// Log-axis value `ln(t)/ln(b)`.
    pub log_value: f64,
    /// Compression ratio `t'/t`.
    pub compression_ratio: f64,
    /// Compression percentage `100 * (1 - t'/t)`.
    pub percent: f64,
}

/// Computes the log value, compression ratio, and compression percentage for
/// one timestamp.
pub fn compression_row(minutes: f64, base: LogBase) -> Result<CompressionRow> {
    let log_value = to_log(minutes, base)?.value;
    let compression_ratio = log_value / minutes;
    Ok(CompressionRow {
        minutes,
        log_value,
        compression_ratio,
        percent: 100.0 * (1.0 - compression_ratio),
    })
}
