//! Curve fitting over annotation points, plus the normalization pipeline.
//!
//! Annotators place a handful of `(log-time, relative validity)` points; a
//! candidate density `f(x; theta)` with a free amplitude `S` is then fitted
//! by bounded least squares, minimizing `sum (y_i - S*f(x_i; theta))^2`.
//! The fitted curve goes through two further stages:
//!
//! 1. AUC normalization: divide by the trapezoidal area `N` over the working
//!    domain so the curve integrates to one and supports interval
//!    probabilities.
//! 2. Proportional rescale: divide by the normalized curve's maximum `f_max`
//!    so the peak reads 1.0, giving a relative-validity curve.
//!
//! The final amplitude satisfies `s_final = s_fit / (N * f_max)`.
//!
//! Initialization is deterministic and peak-anchored; the skew-normal family
//! multi-starts over a small set of shape values and keeps the best sum of
//! squares, breaking exact ties toward the least-skewed start.

mod solver;

pub mod scenarios;

pub use scenarios::{run_scenarios, ScenarioTable};

use serde::{Deserialize, Serialize};

use crate::distributions::{DistributionParams, Family, SkewNormalParams};
use crate::error::{Error, Result};
use crate::timescale::LogBase;

/// One annotated point: position on the log-time axis and relative validity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnnotationPoint {
    /// Log-time coordinate (base 1.1 unless the fit options say otherwise).
    pub x: f64,
    /// Relative validity in `(0, 1]`.
    pub y: f64,
}

impl AnnotationPoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        let p = AnnotationPoint { x, y };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.x.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "annotation x must be finite, got {}",
                self.x
            )));
        }
        if !(self.y > 0.0 && self.y <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "annotation y must lie in (0, 1], got {}",
                self.y
            )));
        }
        Ok(())
    }
}

/// How a curve's amplitude is currently calibrated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// Amplitude as fitted; no integral or peak guarantee.
    Raw,
    /// Integrates to one over the working domain.
    AucOne,
    /// Peak value is one over the working domain.
    Proportional,
}

impl std::fmt::Display for Normalization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Normalization::Raw => "raw",
            Normalization::AucOne => "auc_one",
            Normalization::Proportional => "proportional",
        })
    }
}

/// A scaled density over the log-time axis of a specific base.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidityCurve {
    pub params: DistributionParams,
    /// Amplitude multiplying the unit density.
    pub scale: f64,
    /// Base of the log axis the parameters live on.
    pub base: LogBase,
    pub normalization: Normalization,
}

impl ValidityCurve {
    pub fn new(
        params: DistributionParams,
        scale: f64,
        base: LogBase,
        normalization: Normalization,
    ) -> Result<Self> {
        params.validate()?;
        if scale <= 0.0 || !scale.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "curve scale must be a positive finite number, got {scale}"
            )));
        }
        Ok(ValidityCurve {
            params,
            scale,
            base,
            normalization,
        })
    }

    pub fn family(&self) -> Family {
        self.params.family()
    }

    /// Curve value at a log-axis coordinate (in this curve's base).
    pub fn value_at_log(&self, x: f64) -> f64 {
        self.scale * self.params.density_unchecked(x)
    }

    /// Re-expresses the curve on another base's log axis.
    ///
    /// Log-axis positions scale linearly between bases, so location and
    /// scale parameters pick up the factor `ln(from)/ln(to)` (the
    /// exponential's rate scales inversely, the log-normal's log-space
    /// location shifts by `ln` of the factor); shape parameters are
    /// dimensionless and carried over unchanged. For each family the
    /// re-parameterized unit density is exactly the change-of-variables
    /// image of the original, so the amplitude rule follows the curve's
    /// semantics: density-calibrated curves (`auc_one`) keep their amplitude,
    /// preserving integrals and interval probabilities, while value-
    /// calibrated curves (`raw`, `proportional`) multiply it by the factor so
    /// the curve height at corresponding instants, and in particular a
    /// proportional peak of one, is preserved.
    pub fn convert_base(&self, to: LogBase) -> ValidityCurve {
        if self.base == to {
            return self.clone();
        }
        let factor = self.base.ln() / to.ln();
        let params = match self.params {
            DistributionParams::Gaussian { mu, sigma } => DistributionParams::Gaussian {
                mu: mu * factor,
                sigma: sigma * factor,
            },
            DistributionParams::Exponential { lambda } => DistributionParams::Exponential {
                lambda: lambda / factor,
            },
            DistributionParams::LogNormal { mu, sigma } => DistributionParams::LogNormal {
                mu: mu + factor.ln(),
                sigma,
            },
            DistributionParams::Gamma { k, theta } => DistributionParams::Gamma {
                k,
                theta: theta * factor,
            },
            DistributionParams::SkewNormal(p) => {
                DistributionParams::SkewNormal(crate::timescale::convert_params(p, self.base, to))
            }
        };
        let scale = match self.normalization {
            Normalization::AucOne => self.scale,
            Normalization::Raw | Normalization::Proportional => self.scale * factor,
        };
        ValidityCurve {
            params,
            scale,
            base: to,
            normalization: self.normalization,
        }
    }

    /// Serializes to the curve wire format.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("curve serialization cannot fail")
    }

    /// Parses the curve wire format, validating parameters, base, and scale.
    pub fn from_json(s: &str) -> Result<ValidityCurve> {
        serde_json::from_str(s).map_err(|e| Error::InvalidArgument(format!("bad curve json: {e}")))
    }
}

#[derive(Serialize, Deserialize)]
struct CurveWire {
    family: Family,
    params: serde_json::Value,
    amplitude: f64,
    log_base: f64,
    normalization: Normalization,
}

impl Serialize for ValidityCurve {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        CurveWire {
            family: self.family(),
            params: self.params.to_param_json(),
            amplitude: self.scale,
            log_base: self.base.value(),
            normalization: self.normalization,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ValidityCurve {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as DeError;
        let wire = CurveWire::deserialize(deserializer)?;
        let params = DistributionParams::from_param_json(wire.family, &wire.params)
            .map_err(D::Error::custom)?;
        let base = LogBase::new(wire.log_base).map_err(D::Error::custom)?;
        ValidityCurve::new(params, wire.amplitude, base, wire.normalization)
            .map_err(D::Error::custom)
    }
}

/// Integration window for normalization and peak finding.
///
/// The window is pinned to a reference base so that it denotes the same span
/// of linear time in every representation: converting a curve to another base
/// converts the window endpoints by the same linear factor, which keeps
/// integrals and maxima comparable across bases.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WorkingDomain {
    pub min: f64,
    pub max: f64,
    pub base: LogBase,
}

impl WorkingDomain {
    pub fn new(min: f64, max: f64, base: LogBase) -> Result<Self> {
        if !min.is_finite() || !max.is_finite() || min >= max {
            return Err(Error::InvalidArgument(format!(
                "working domain must satisfy min < max with finite endpoints, got [{min}, {max}]"
            )));
        }
        Ok(WorkingDomain { min, max, base })
    }

    /// Endpoints of this window on another base's log axis.
    pub fn endpoints_in(&self, base: LogBase) -> (f64, f64) {
        if self.base == base {
            return (self.min, self.max);
        }
        let factor = self.base.ln() / base.ln();
        (self.min * factor, self.max * factor)
    }
}

impl Default for WorkingDomain {
    /// `[0, 180]` in base-1.1 log units: one minute out to roughly half a
    /// century, comfortably past every tabulated horizon.
    fn default() -> Self {
        WorkingDomain {
            min: 0.0,
            max: 180.0,
            base: LogBase::default(),
        }
    }
}

/// Default grid resolution for trapezoidal integrals and grid scans.
pub const DEFAULT_GRID_N: usize = 10_001;

/// Everything configurable about a fit.
#[derive(Debug, Clone, PartialEq)]
pub struct FitOptions {
    /// Base of the log axis the input points use.
    pub base: LogBase,
    /// Window for AUC normalization and peak finding.
    pub domain: WorkingDomain,
    /// Grid points for trapezoidal integration and maxima scans.
    pub grid_n: usize,
    /// Skew-normal shape starts; the best final objective wins.
    pub multistart_alphas: Vec<f64>,
    /// Solver step tolerance.
    pub step_tol: f64,
    /// Solver objective-decrease tolerance.
    pub cost_tol: f64,
    /// Budget of residual evaluations per start.
    pub max_nfev: usize,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            base: LogBase::default(),
            domain: WorkingDomain::default(),
            grid_n: DEFAULT_GRID_N,
            multistart_alphas: vec![-3.0, 0.0, 3.0],
            step_tol: 1e-10,
            cost_tol: 1e-12,
            max_nfev: 10_000,
        }
    }
}

impl FitOptions {
    pub fn validate(&self) -> Result<()> {
        if self.grid_n < 2 {
            return Err(Error::InvalidArgument(format!(
                "grid_n must be at least 2, got {}",
                self.grid_n
            )));
        }
        if self.multistart_alphas.is_empty() {
            return Err(Error::InvalidArgument(
                "multistart_alphas must not be empty".into(),
            ));
        }
        if !self.multistart_alphas.iter().all(|a| a.is_finite()) {
            return Err(Error::InvalidArgument(
                "multistart_alphas must be finite".into(),
            ));
        }
        let tol_ok = |t: f64| t.is_finite() && t > 0.0;
        if !tol_ok(self.step_tol) || !tol_ok(self.cost_tol) {
            return Err(Error::InvalidArgument(
                "solver tolerances must be positive and finite".into(),
            ));
        }
        if self.max_nfev == 0 {
            return Err(Error::InvalidArgument("max_nfev must be positive".into()));
        }
        Ok(())
    }

    fn solver(&self) -> solver::SolverOptions {
        solver::SolverOptions {
            step_tol: self.step_tol,
            cost_tol: self.cost_tol,
            max_nfev: self.max_nfev,
        }
    }
}

/// Outcome of fitting one family to one point set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult {
    pub family: Family,
    #[serde(serialize_with = "serialize_params")]
    pub params: DistributionParams,
    /// Fitted amplitude `S`.
    pub s_fit: f64,
    /// Trapezoidal area `N` under the fitted curve over the working domain.
    pub auc: f64,
    /// Peak of the AUC-normalized curve.
    pub f_max: f64,
    /// Final amplitude `s_fit / (auc * f_max)` of the proportional curve.
    pub s_final: f64,
    /// Root-mean-square residual at the solution.
    pub rmse: f64,
    /// Accepted solver steps for the winning start.
    pub iterations: usize,
    pub converged: bool,
}

fn serialize_params<S: serde::Serializer>(
    params: &DistributionParams,
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    params.to_param_json().serialize(serializer)
}

impl FitResult {
    /// The raw fitted curve (amplitude `s_fit`, normalization `raw`).
    pub fn raw_curve(&self, base: LogBase) -> ValidityCurve {
        ValidityCurve {
            params: self.params,
            scale: self.s_fit,
            base,
            normalization: Normalization::Raw,
        }
    }
}

/// Minimum point count per family, counting the amplitude as a parameter.
fn min_points(family: Family) -> usize {
    match family {
        Family::Exponential => 2,
        Family::Gaussian | Family::LogNormal | Family::Gamma => 3,
        Family::SkewNormal => 4,
    }
}

/// Fits one family to the points and runs the normalization pipeline.
///
/// Returns the best-of-multistart result; non-convergence within the
/// evaluation budget is reported through `converged = false` on the best
/// candidate found, not as an error.
pub fn fit(points: &[AnnotationPoint], family: Family, options: &FitOptions) -> Result<FitResult> {
    options.validate()?;
    for p in points {
        p.validate()?;
    }
    if points.len() < min_points(family) {
        return Err(Error::InvalidArgument(format!(
            "{} fit needs at least {} points, got {}",
            family,
            min_points(family),
            points.len()
        )));
    }
    let mut xs: Vec<f64> = points.iter().map(|p| p.x).collect();
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    if xs.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidArgument(
            "annotation x values must be distinct".into(),
        ));
    }
    if matches!(family, Family::LogNormal | Family::Gamma) && xs[0] <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "{family} fits require every x to be positive, got {}",
            xs[0]
        )));
    }

    let x_min = xs[0];
    let x_max = xs[xs.len() - 1];
    let range = x_max - x_min;
    let peak = points
        .iter()
        .fold(points[0], |best, &p| if p.y > best.y { p } else { best });

    // Parameter vector layout: family parameters, then the amplitude S last.
    let starts = initial_starts(points, family, options, x_min, x_max, range, peak);

    let mut best: Option<(solver::SolverOutcome, f64)> = None;
    for start in &starts {
        let out = solver::least_squares_bounded(
            |v, r| {
                let params = params_from_vec(family, v);
                let s = v[v.len() - 1];
                for (i, p) in points.iter().enumerate() {
                    r[i] = p.y - s * params.density_unchecked(p.x);
                }
            },
            points.len(),
            &start.x0,
            &start.lo,
            &start.hi,
            &options.solver(),
        );
        let replace = match &best {
            None => true,
            Some((cur, cur_tag)) => {
                let scale = cur.cost.max(out.cost).max(1e-300);
                if (out.cost - cur.cost).abs() <= 1e-12 * scale {
                    // Effective tie: prefer the simpler (least skewed) start.
                    start.tie_break < *cur_tag
                } else {
                    out.cost < cur.cost
                }
            }
        };
        if replace {
            best = Some((out, start.tie_break));
        }
    }
    let (out, _) = best.expect("at least one start");

    let params = params_from_vec(family, &out.x);
    let s_fit = out.x[out.x.len() - 1];
    let rmse = (out.cost / points.len() as f64).sqrt();

    // Normalization pipeline over the working domain, in the fit's base.
    let (dmin, dmax) = options.domain.endpoints_in(options.base);
    let unit_area = trapezoid_unit_area(&params, dmin, dmax, options.grid_n);
    if unit_area <= 0.0 || !unit_area.is_finite() {
        return Err(Error::Numeric(format!(
            "degenerate curve: area over working domain is {unit_area}"
        )));
    }
    let auc = s_fit * unit_area;
    let (_, unit_peak) =
        grid_golden_max(|x| params.density_unchecked(x), dmin, dmax, options.grid_n);
    let f_max = unit_peak / unit_area;
    if f_max <= 0.0 || !f_max.is_finite() {
        return Err(Error::Numeric(format!(
            "degenerate curve: normalized peak is {f_max}"
        )));
    }

    Ok(FitResult {
        family,
        params,
        s_fit,
        auc,
        f_max,
        s_final: s_fit / (auc * f_max),
        rmse,
        iterations: out.iterations,
        converged: out.converged,
    })
}

struct Start {
    x0: Vec<f64>,
    lo: Vec<f64>,
    hi: Vec<f64>,
    /// Ordering key for exact-cost ties (|alpha| start for skew-normal,
    /// start index elsewhere).
    tie_break: f64,
}

const POS_LO: f64 = 1e-6;
const POS_HI: f64 = 1e6;

#[allow(clippy::too_many_arguments)]
fn initial_starts(
    points: &[AnnotationPoint],
    family: Family,
    options: &FitOptions,
    x_min: f64,
    x_max: f64,
    range: f64,
    peak: AnnotationPoint,
) -> Vec<Start> {
    // Amplitude start: make the curve pass through the peak point.
    let s0 = |params: &DistributionParams| -> f64 {
        let d = params.density_unchecked(peak.x);
        if d > 1e-300 {
            (peak.y / d).clamp(POS_LO, POS_HI)
        } else {
            1.0
        }
    };

    match family {
        Family::Gaussian => {
            let params = DistributionParams::Gaussian {
                mu: peak.x,
                sigma: (range / 4.0).clamp(POS_LO, POS_HI),
            };
            let (mu0, sigma0) = (peak.x, (range / 4.0).clamp(POS_LO, POS_HI));
            vec![Start {
                x0: vec![mu0, sigma0, s0(&params)],
                lo: vec![x_min - range, POS_LO, POS_LO],
                hi: vec![x_max + range, POS_HI, POS_HI],
                tie_break: 0.0,
            }]
        }
        Family::Exponential => {
            let mean_x = points.iter().map(|p| p.x).sum::<f64>() / points.len() as f64;
            let lambda0 = if mean_x > 0.0 {
                (1.0 / mean_x).clamp(POS_LO, POS_HI)
            } else {
                1.0
            };
            let params = DistributionParams::Exponential { lambda: lambda0 };
            vec![Start {
                x0: vec![lambda0, s0(&params)],
                lo: vec![POS_LO, POS_LO],
                hi: vec![POS_HI, POS_HI],
                tie_break: 0.0,
            }]
        }
        Family::LogNormal => {
            // Location-scale init lives in log space: anchor the mode at the
            // peak point via mu = ln(x_peak) + sigma^2, and bound mu within a
            // log-range margin of the data's log span.
            let log_range = x_max.ln() - x_min.ln();
            let sigma_starts = [(log_range / 4.0).max(1e-3), 0.25];
            let lo = vec![x_min.ln() - log_range, POS_LO, POS_LO];
            let hi = vec![x_max.ln() + log_range, POS_HI, POS_HI];
            let mut starts = Vec::new();
            for (i, &sigma0) in sigma_starts.iter().enumerate() {
                if i == 1 && (sigma_starts[1] - sigma_starts[0]).abs() < 1e-9 {
                    continue;
                }
                let mu0 = (peak.x.ln() + sigma0 * sigma0).clamp(lo[0], hi[0]);
                let params = DistributionParams::LogNormal {
                    mu: mu0,
                    sigma: sigma0,
                };
                starts.push(Start {
                    x0: vec![mu0, sigma0, s0(&params)],
                    lo: lo.clone(),
                    hi: hi.clone(),
                    tie_break: i as f64,
                });
            }
            starts
        }
        Family::Gamma => {
            // Match the mode (k-1)*theta to the peak and the spread to the
            // quarter-range heuristic used by the other families.
            let spread = (range / 4.0).max(1e-3);
            let theta0 = (spread * spread / peak.x).clamp(POS_LO, POS_HI);
            let k0 = (peak.x / theta0 + 1.0).clamp(POS_LO, POS_HI);
            let params = DistributionParams::Gamma {
                k: k0,
                theta: theta0,
            };
            vec![Start {
                x0: vec![k0, theta0, s0(&params)],
                lo: vec![POS_LO, POS_LO, POS_LO],
                hi: vec![POS_HI, POS_HI, POS_HI],
                tie_break: 0.0,
            }]
        }
        Family::SkewNormal => {
            let omega0 = (range / 4.0).clamp(POS_LO, POS_HI);
            options
                .multistart_alphas
                .iter()
                .map(|&alpha0| {
                    let alpha0 = alpha0.clamp(-50.0, 50.0);
                    let params = DistributionParams::SkewNormal(SkewNormalParams {
                        xi: peak.x,
                        omega: omega0,
                        alpha: alpha0,
                    });
                    Start {
                        x0: vec![peak.x, omega0, alpha0, s0(&params)],
                        lo: vec![x_min - range, POS_LO, -50.0, POS_LO],
                        hi: vec![x_max + range, POS_HI, 50.0, POS_HI],
                        tie_break: alpha0.abs(),
                    }
                })
                .collect()
        }
    }
}

/// Rebuilds family parameters from the solver vector (amplitude excluded).
fn params_from_vec(family: Family, v: &[f64]) -> DistributionParams {
    match family {
        Family::Gaussian => DistributionParams::Gaussian {
            mu: v[0],
            sigma: v[1],
        },
        Family::Exponential => DistributionParams::Exponential { lambda: v[0] },
        Family::LogNormal => DistributionParams::LogNormal {
            mu: v[0],
            sigma: v[1],
        },
        Family::Gamma => DistributionParams::Gamma {
            k: v[0],
            theta: v[1],
        },
        Family::SkewNormal => DistributionParams::SkewNormal(SkewNormalParams {
            xi: v[0],
            omega: v[1],
            alpha: v[2],
        }),
    }
}

/// Trapezoidal area of the unit density over `[a, b]` on `n` grid points.
fn trapezoid_unit_area(params: &DistributionParams, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / (n - 1) as f64;
    let mut sum = 0.5 * (params.density_unchecked(a) + params.density_unchecked(b));
    for i in 1..n - 1 {
        sum += params.density_unchecked(a + h * i as f64);
    }
    sum * h
}

/// Locates the maximum of `f` over `[a, b]`: grid scan for the basin, then
/// golden-section refinement of the bracketing cell to `1e-9`.
fn grid_golden_max(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> (f64, f64) {
    let h = (b - a) / (n - 1) as f64;
    let mut best_i = 0usize;
    let mut best_v = f64::NEG_INFINITY;
    for i in 0..n {
        let v = f(a + h * i as f64);
        if v > best_v {
            best_v = v;
            best_i = i;
        }
    }
    let lo = if best_i == 0 {
        a
    } else {
        a + h * (best_i - 1) as f64
    };
    let hi = if best_i == n - 1 {
        b
    } else {
        a + h * (best_i + 1) as f64
    };
    let (x, v) = golden_max(&f, lo, hi, 1e-9);
    if v >= best_v {
        (x, v)
    } else {
        (a + h * best_i as f64, best_v)
    }
}

fn golden_max(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
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
    let mid = 0.5 * (a + b);
    (mid, f(mid))
}

/// Rescales a curve so its trapezoidal integral over `domain` is one.
///
/// `domain` is given on the curve's own log axis. Already-normalized curves
/// come back unchanged up to floating-point noise (the integral recomputes to
/// one). Fails when the area under the curve degenerates to zero or infinity.
pub fn auc_normalize(
    curve: &ValidityCurve,
    domain: (f64, f64),
    grid_n: usize,
) -> Result<ValidityCurve> {
    let (a, b) = domain;
    if !a.is_finite() || !b.is_finite() || a >= b {
        return Err(Error::InvalidArgument(format!(
            "integration domain must satisfy a < b with finite endpoints, got [{a}, {b}]"
        )));
    }
    if grid_n < 2 {
        return Err(Error::InvalidArgument(format!(
            "grid_n must be at least 2, got {grid_n}"
        )));
    }
    let area = curve.scale * trapezoid_unit_area(&curve.params, a, b, grid_n);
    if area <= 0.0 || !area.is_finite() {
        return Err(Error::Numeric(format!(
            "cannot normalize: area over [{a}, {b}] is {area}"
        )));
    }
    Ok(ValidityCurve {
        params: curve.params,
        scale: curve.scale / area,
        base: curve.base,
        normalization: Normalization::AucOne,
    })
}

/// Rescales a curve so its maximum over `domain` is one.
pub fn proportional_rescale_over(
    curve: &ValidityCurve,
    domain: (f64, f64),
    grid_n: usize,
) -> Result<ValidityCurve> {
    let (a, b) = domain;
    if !a.is_finite() || !b.is_finite() || a >= b {
        return Err(Error::InvalidArgument(format!(
            "scan domain must satisfy a < b with finite endpoints, got [{a}, {b}]"
        )));
    }
    if grid_n < 2 {
        return Err(Error::InvalidArgument(format!(
            "grid_n must be at least 2, got {grid_n}"
        )));
    }
    let (_, peak) = grid_golden_max(|x| curve.value_at_log(x), a, b, grid_n);
    if peak <= 0.0 || !peak.is_finite() {
        return Err(Error::Numeric(format!(
            "cannot rescale: maximum over [{a}, {b}] is {peak}"
        )));
    }
    Ok(ValidityCurve {
        params: curve.params,
        scale: curve.scale / peak,
        base: curve.base,
        normalization: Normalization::Proportional,
    })
}

/// [`proportional_rescale_over`] on the default working domain expressed in
/// the curve's base.
pub fn proportional_rescale(curve: &ValidityCurve) -> Result<ValidityCurve> {
    let domain = WorkingDomain::default().endpoints_in(curve.base);
    proportional_rescale_over(curve, domain, DEFAULT_GRID_N)
}

/// Root-mean-square residual between points and a curve.
pub fn rmse(points: &[AnnotationPoint], curve: &ValidityCurve) -> Result<f64> {
    if points.is_empty() {
        return Err(Error::InvalidArgument(
            "rmse needs at least one point".into(),
        ));
    }
    let ssr: f64 = points
        .iter()
        .map(|p| {
            let r = p.y - curve.value_at_log(p.x);
            r * r
        })
        .sum();
    Ok((ssr / points.len() as f64).sqrt())
}
