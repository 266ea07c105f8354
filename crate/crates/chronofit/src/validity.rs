//! Queries against a fitted validity curve: point values, interval
//! probabilities, peak location, and sampling for plots or export.
//!
//! Interval probabilities integrate the piecewise-linear interpolant of the
//! curve on the working-domain grid (the same construction AUC normalization
//! uses), evaluated through a prefix-integral function `F`. Because every
//! query reads the same `F`, adjacent intervals add up exactly:
//! `P([a,b]) + P([b,c]) = P([a,c])` to the last bit, and the full domain
//! comes back as 1 for an `auc_one` curve.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fitting::{Normalization, ValidityCurve, WorkingDomain, DEFAULT_GRID_N};
use crate::timescale::{from_log, to_log, LogTime, MIN_MINUTES};

/// A closed time interval in minutes, `1 <= a < b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalQuery {
    a: f64,
    b: f64,
}

impl IntervalQuery {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "interval endpoints must be finite, got [{a}, {b}]"
            )));
        }
        if a < MIN_MINUTES {
            return Err(Error::Domain(format!(
                "sub-minute time unsupported: interval starts at {a} min"
            )));
        }
        if a >= b {
            return Err(Error::InvalidArgument(format!(
                "interval must satisfy a < b, got [{a}, {b}]"
            )));
        }
        Ok(IntervalQuery { a, b })
    }

    pub fn start_minutes(&self) -> f64 {
        self.a
    }

    pub fn end_minutes(&self) -> f64 {
        self.b
    }
}

/// Curve value at `t` minutes: the curve's amplitude times the density at
/// `ln(t)/ln(base)`. Sub-minute times are domain errors.
pub fn validity_at(curve: &ValidityCurve, t_minutes: f64) -> Result<f64> {
    let x = to_log(t_minutes, curve.base)?;
    Ok(curve.value_at_log(x.value))
}

/// Probability mass of the curve over a time interval, using the default
/// working domain and grid.
pub fn interval_probability(curve: &ValidityCurve, query: IntervalQuery) -> Result<f64> {
    interval_probability_with(curve, query, &WorkingDomain::default(), DEFAULT_GRID_N)
}

/// Probability mass of the curve over a time interval.
///
/// Requires an `auc_one` curve; raw or proportional amplitudes do not carry
/// probability semantics and are rejected. Mass outside the working domain is
/// zero by construction.
pub fn interval_probability_with(
    curve: &ValidityCurve,
    query: IntervalQuery,
    domain: &WorkingDomain,
    grid_n: usize,
) -> Result<f64> {
    if curve.normalization != Normalization::AucOne {
        return Err(Error::Semantics(format!(
            "interval probability needs an auc_one curve, got {}; run AUC normalization first",
            curve.normalization
        )));
    }
    if grid_n < 2 {
        return Err(Error::InvalidArgument(format!(
            "grid_n must be at least 2, got {grid_n}"
        )));
    }
    let (dmin, dmax) = domain.endpoints_in(curve.base);
    let la = to_log(query.a, curve.base)?.value;
    let lb = to_log(query.b, curve.base)?.value;

    let f = PrefixIntegral::build(curve, dmin, dmax, grid_n);
    Ok(f.at(lb) - f.at(la))
}

/// Exact integral of the piecewise-linear interpolant of curve values on a
/// uniform grid, as a function of the upper limit.
struct PrefixIntegral {
    dmin: f64,
    h: f64,
    values: Vec<f64>,
    /// `prefix[i]` = integral from the grid start to node `i`.
    prefix: Vec<f64>,
}

impl PrefixIntegral {
    fn build(curve: &ValidityCurve, dmin: f64, dmax: f64, grid_n: usize) -> Self {
        let h = (dmax - dmin) / (grid_n - 1) as f64;
        let values: Vec<f64> = (0..grid_n)
            .map(|i| curve.value_at_log(dmin + h * i as f64))
            .collect();
        let mut prefix = Vec::with_capacity(grid_n);
        prefix.push(0.0);
        for i in 1..grid_n {
            let cell = 0.5 * (values[i - 1] + values[i]) * h;
            let last = *prefix.last().unwrap();
            prefix.push(last + cell);
        }
        PrefixIntegral {
            dmin,
            h,
            values,
            prefix,
        }
    }

    /// Integral from the grid start to `x`, clamping `x` into the grid span.
    fn at(&self, x: f64) -> f64 {
        let n = self.values.len();
        let pos = (x - self.dmin) / self.h;
        if pos <= 0.0 {
            return 0.0;
        }
        if pos >= (n - 1) as f64 {
            return self.prefix[n - 1];
        }
        let cell = pos.floor() as usize;
        let frac = pos - cell as f64;
        let v0 = self.values[cell];
        let v1 = self.values[cell + 1];
        // Integral of the linear segment over [0, frac] of the cell.
        let partial = self.h * frac * (v0 + 0.5 * frac * (v1 - v0));
        self.prefix[cell] + partial
    }
}

/// Time in minutes where the curve attains its maximum over the default
/// working domain.
pub fn peak_minutes(curve: &ValidityCurve) -> Result<f64> {
    peak_minutes_with(curve, &WorkingDomain::default(), DEFAULT_GRID_N)
}

/// Time in minutes where the curve attains its maximum over `domain`.
///
/// Grid scan plus golden-section refinement; curves that decay from the very
/// start (exponential) report the domain's left edge, i.e. one minute for the
/// default domain.
pub fn peak_minutes_with(
    curve: &ValidityCurve,
    domain: &WorkingDomain,
    grid_n: usize,
) -> Result<f64> {
    if grid_n < 2 {
        return Err(Error::InvalidArgument(format!(
            "grid_n must be at least 2, got {grid_n}"
        )));
    }
    let (dmin, dmax) = domain.endpoints_in(curve.base);
    let h = (dmax - dmin) / (grid_n - 1) as f64;
    let mut best_i = 0usize;
    let mut best_v = f64::NEG_INFINITY;
    for i in 0..grid_n {
        let v = curve.value_at_log(dmin + h * i as f64);
        if v > best_v {
            best_v = v;
            best_i = i;
        }
    }
    let lo = if best_i == 0 {
        dmin
    } else {
        dmin + h * (best_i - 1) as f64
    };
    let hi = if best_i == grid_n - 1 {
        dmax
    } else {
        dmin + h * (best_i + 1) as f64
    };
    let x = golden_argmax(|x| curve.value_at_log(x), lo, hi, 1e-9);
    let x = if curve.value_at_log(x) >= best_v {
        x
    } else {
        dmin + h * best_i as f64
    };
    from_log(LogTime {
        value: x,
        base: curve.base,
    })
}

fn golden_argmax(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// One row of a sampled curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SamplePoint {
    pub t_minutes: f64,
    pub t_log: f64,
    pub value: f64,
}

/// Samples the curve at `n` log-uniform times across `[t_min, t_max]`
/// minutes. Values agree with [`validity_at`] by construction.
pub fn sample_curve(
    curve: &ValidityCurve,
    n: usize,
    t_range_minutes: (f64, f64),
) -> Result<Vec<SamplePoint>> {
    let (t_lo, t_hi) = t_range_minutes;
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "sample count must be at least 2, got {n}"
        )));
    }
    if !t_lo.is_finite() || !t_hi.is_finite() || t_lo >= t_hi {
        return Err(Error::InvalidArgument(format!(
            "sample range must satisfy lo < hi with finite endpoints, got [{t_lo}, {t_hi}]"
        )));
    }
    let l_lo = to_log(t_lo, curve.base)?.value;
    let l_hi = to_log(t_hi, curve.base)?.value;
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let l = l_lo + (l_hi - l_lo) * i as f64 / (n - 1) as f64;
        let t = from_log(LogTime {
            value: l,
            base: curve.base,
        })?;
        rows.push(SamplePoint {
            t_minutes: t,
            t_log: l,
            value: validity_at(curve, t)?,
        });
    }
    Ok(rows)
}
