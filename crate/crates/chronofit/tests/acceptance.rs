//! Acceptance suite: one test per release criterion, so the harness output
//! reads as one pass/fail line per criterion.
//!
//! Tolerances are the stated acceptance tolerances, never looser. Reference
//! digits and hand-computed oracle values are frozen here on purpose;
//! regenerating them from the code under test would make the suite circular.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use chronofit::dataset::{
    axis_counts, dedup_samples, load_jsonl_path, stratified_split, zscore_stats, Sample, SplitSpec,
};
use chronofit::distributions::{density, DistributionParams, Family, SkewNormalParams};
use chronofit::fitting::scenarios::{
    run_scenarios, FAMILY_ORDER, REFERENCE_RMSE, SCENARIO_COUNT, SCENARIO_LABELS,
};
use chronofit::fitting::{
    auc_normalize, fit, AnnotationPoint, FitOptions, FitResult, Normalization, ValidityCurve,
    WorkingDomain,
};
use chronofit::metrics::{
    cohen_kappa, crps, icc, jaccard, mae, merge_labels, micro_precision, pk, regression_report,
    spearman, IccVariant,
};
use chronofit::timescale::{compression_row, convert_params, LogBase};
use chronofit::validity::{interval_probability_with, peak_minutes_with, IntervalQuery};

/// ln(2*pi)/2, from an independent high-precision evaluation.
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_7;

// --- criterion 1 -----------------------------------------------------------

/// The published compression table: seven timestamps, and per base the
/// printed log value, compression ratio, and compression percentage. Values
/// are kept as strings so "displayed precision" and "one unit of the last
/// printed digit" can be derived from the text itself.
const COMPRESSION_BASES: [f64; 3] = [1.1, 2.0, 10.0];

/// Printed (log value, compression ratio, percentage) for one base.
type PrintedCells = [(&'static str, &'static str, &'static str); 3];

#[rustfmt::skip]
const COMPRESSION_REFERENCE: [(&str, f64, PrintedCells); 7] = [
    ("1 minute", 1.0, [("0.0", "0.000", "100"), ("0.0", "0.000", "100"), ("0.0", "0.000", "100")]),
    ("1 hour", 60.0, [("42.96", "0.716", "28.4"), ("5.91", "0.099", "90.1"), ("1.78", "0.030", "97.0")]),
    ("1 day", 1440.0, [("76.30", "0.053", "94.7"), ("10.47", "0.007", "99.3"), ("3.16", "0.002", "99.8")]),
    ("1 week", 10080.0, [("96.73", "0.010", "99.0"), ("13.30", "0.001", "99.9"), ("4.00", "3.968e-4", "99.9")]),
    ("1 month", 43200.0, [("111.97", "0.003", "99.7"), ("15.39", "3.563e-4", "99.9"), ("4.63", "1.072e-4", "~100")]),
    ("1 year", 525600.0, [("138.23", "2.623e-4", "~100"), ("19.00", "3.615e-5", "~100"), ("5.72", "1.088e-5", "~100")]),
    ("1 decade", 5256000.0, [("162.25", "3.087e-5", "~100"), ("22.33", "4.249e-6", "~100"), ("6.72", "1.279e-6", "~100")]),
];

/// One unit in the last printed digit of a decimal or scientific literal.
fn last_digit_unit(printed: &str) -> f64 {
    let (mantissa, exponent) = match printed.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().expect("reference exponent")),
        None => (printed, 0),
    };
    let decimals = mantissa
        .split_once('.')
        .map_or(0, |(_, frac)| frac.len() as i32);
    10f64.powi(exponent - decimals)
}

/// Tolerance implied by a printed percentage: half a unit of its last digit.
/// A leading `~` marks a value the source rounded to the nearest integer.
fn percent_tolerance(printed: &str) -> (f64, f64) {
    let clean = printed.trim_start_matches('~');
    let value: f64 = clean.parse().expect("reference percent");
    (value, 0.5 * last_digit_unit(clean))
}

/// Checks every cell of the compression reference table at displayed
/// precision: log values within 0.01, compression ratios within one unit of
/// the last printed digit, percentages to their displayed rounding.
///
/// This criterion fails, and the failure is a defect in the reference table
/// itself, not in the conversion code: several printed cells disagree with
/// the table's own defining formulas by more than the stated tolerance. The
/// clearest case is one day at base 2, printed as 10.47, while
/// ln(1440)/ln(2) = 10.4919 (2^10.47 is about 1418, not 1440). The unit and
/// property suites in `timescale` pin the formulas themselves; this test
/// reports every discrepant cell and is left red deliberately rather than
/// loosening the stated tolerances until the defects vanish.
#[test]
fn criterion_1_compression_reference_table() {
    let started = Instant::now();
    let mut failures = Vec::new();

    for &(label, minutes, cells) in &COMPRESSION_REFERENCE {
        for (bi, &base) in COMPRESSION_BASES.iter().enumerate() {
            let row = compression_row(minutes, LogBase::new(base).unwrap())
                .unwrap_or_else(|e| panic!("compression_row({minutes}, {base}): {e}"));
            let (printed_log, printed_cr, printed_pct) = cells[bi];

            let want_log: f64 = printed_log.parse().unwrap();
            if (row.log_value - want_log).abs() > 0.01 {
                failures.push(format!(
                    "{label} base {base}: log value printed {printed_log}, computed {:.6} (allowed +-0.01)",
                    row.log_value
                ));
            }

            let want_cr: f64 = printed_cr.parse().unwrap();
            let unit = last_digit_unit(printed_cr);
            // Tiny relative slack so "one unit" is not defeated by the
            // binary representation of the decimal unit itself.
            if (row.compression_ratio - want_cr).abs() > unit * (1.0 + 1e-9) {
                failures.push(format!(
                    "{label} base {base}: ratio printed {printed_cr}, computed {:.6e} (allowed one last-digit unit = {unit:.0e})",
                    row.compression_ratio
                ));
            }

            let (want_pct, pct_tol) = percent_tolerance(printed_pct);
            if (row.percent - want_pct).abs() > pct_tol {
                failures.push(format!(
                    "{label} base {base}: percent printed {printed_pct}, computed {:.4} (allowed +-{pct_tol})",
                    row.percent
                ));
            }
        }
    }

    let elapsed = started.elapsed();
    assert!(
        elapsed.as_secs_f64() < 1.0,
        "criterion 1: FAIL - 21 compression rows took {elapsed:?}, budget is 1 s"
    );

    assert!(
        failures.is_empty(),
        "criterion 1: FAIL - {} of 63 reference cells disagree with their own defining \
         formulas at the stated tolerance. The computation is pinned independently by the \
         timescale unit suite; these are defects in the reference digits:\n  {}",
        failures.len(),
        failures.join("\n  ")
    );
    println!("criterion 1: PASS - compression table reproduced at displayed precision");
}

// --- criterion 2 -----------------------------------------------------------

/// Absolute RMSE tolerance against the published scenario table, per family.
fn scenario_tolerance(family: Family) -> f64 {
    match family {
        Family::Gaussian | Family::SkewNormal => 0.010,
        Family::LogNormal | Family::Gamma => 0.015,
        Family::Exponential => 0.02,
    }
}

#[test]
fn criterion_2_scenario_rmse_table() {
    let started = Instant::now();
    let table = run_scenarios().expect("scenario fits");
    for s in 0..SCENARIO_COUNT {
        assert!(
            table.strictly_best(s, Family::SkewNormal),
            "criterion 2: FAIL - skew-normal is not strictly best in {}: {:?}",
            SCENARIO_LABELS[s],
            table.rmse[s]
        );
        assert!(
            table.strictly_worst(s, Family::Exponential),
            "criterion 2: FAIL - exponential is not strictly worst in {}: {:?}",
            SCENARIO_LABELS[s],
            table.rmse[s]
        );
        for (f, &family) in FAMILY_ORDER.iter().enumerate() {
            let got = table.rmse[s][f];
            let want = REFERENCE_RMSE[s][f];
            let tol = scenario_tolerance(family);
            assert!(
                (got - want).abs() <= tol,
                "criterion 2: FAIL - {} {family}: rmse {got:.4} vs reference {want:.4} (tol {tol})",
                SCENARIO_LABELS[s]
            );
        }
    }
    let elapsed = started.elapsed();
    assert!(
        elapsed.as_secs_f64() < 30.0,
        "criterion 2: FAIL - scenario table took {elapsed:?}, budget is 30 s"
    );
    println!(
        "criterion 2: PASS - scenario rankings exact, all 30 RMSE cells within tolerance, {:?}",
        elapsed
    );
}

// --- criterion 3 -----------------------------------------------------------

/// A random log base in [1.02, 12], log-uniform so small and large bases are
/// equally represented.
fn random_base(rng: &mut ChaCha8Rng) -> LogBase {
    let ln_b = rng.random_range(1.02f64.ln()..12f64.ln());
    LogBase::new(ln_b.exp()).unwrap()
}

/// Random parameters for `family`, placed inside a working window `[lo, hi]`
/// on the log axis so the curve carries real mass there.
fn random_params_in_window(
    rng: &mut ChaCha8Rng,
    family: Family,
    lo: f64,
    hi: f64,
) -> DistributionParams {
    let width = hi - lo;
    match family {
        Family::Gaussian => DistributionParams::Gaussian {
            mu: lo + rng.random_range(0.15..0.85) * width,
            sigma: rng.random_range(0.02..0.12) * width,
        },
        Family::Exponential => DistributionParams::Exponential {
            lambda: 1.0 / (rng.random_range(0.05..0.5) * width),
        },
        Family::LogNormal => DistributionParams::LogNormal {
            mu: (rng.random_range(0.1..0.6) * hi).ln(),
            sigma: rng.random_range(0.2..0.9),
        },
        Family::Gamma => {
            let k = rng.random_range(1.5..10.0);
            DistributionParams::Gamma {
                k,
                theta: rng.random_range(0.15..0.6) * hi / k,
            }
        }
        Family::SkewNormal => DistributionParams::SkewNormal(
            SkewNormalParams::new(
                lo + rng.random_range(0.15..0.85) * width,
                rng.random_range(0.02..0.12) * width,
                rng.random_range(-6.0..6.0),
            )
            .unwrap(),
        ),
    }
}

#[test]
fn criterion_3_base_conversion_round_trips_and_query_invariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC3);
    let domain = WorkingDomain::default();
    // The invariance holds on any integration grid; a moderate one keeps the
    // thousand-trial loop quick without touching the tolerance.
    let grid_n = 1001;

    for trial in 0..1000 {
        let b1 = random_base(&mut rng);
        let mut b2 = random_base(&mut rng);
        while (b2.value() - b1.value()).abs() < 1e-9 {
            b2 = random_base(&mut rng);
        }

        // There-and-back parameter conversion.
        let p = SkewNormalParams::new(
            rng.random_range(5.0..150.0),
            rng.random_range(0.5..40.0),
            rng.random_range(-8.0..8.0),
        )
        .unwrap();
        let back = convert_params(convert_params(p, b1, b2), b2, b1);
        assert!(
            (back.xi - p.xi).abs() <= 1e-12,
            "criterion 3: FAIL - trial {trial}: xi {} -> {} across {} / {}",
            p.xi,
            back.xi,
            b1.value(),
            b2.value()
        );
        assert!(
            (back.omega - p.omega).abs() <= 1e-12,
            "criterion 3: FAIL - trial {trial}: omega {} -> {}",
            p.omega,
            back.omega
        );
        assert_eq!(
            back.alpha.to_bits(),
            p.alpha.to_bits(),
            "criterion 3: FAIL - trial {trial}: alpha must survive bit-exactly"
        );

        // Query invariance under whole-curve conversion, cycling families.
        let family = Family::ALL[trial % Family::ALL.len()];
        let (lo, hi) = domain.endpoints_in(b1);
        let params = random_params_in_window(&mut rng, family, lo, hi);
        let raw =
            ValidityCurve::new(params, rng.random_range(0.3..3.0), b1, Normalization::Raw).unwrap();
        let c1 = auc_normalize(&raw, (lo, hi), grid_n).expect("normalize");
        let c2 = c1.convert_base(b2);

        let peak1 = peak_minutes_with(&c1, &domain, grid_n).unwrap();
        let peak2 = peak_minutes_with(&c2, &domain, grid_n).unwrap();
        let peak_rel = (peak1 - peak2).abs() / peak1.abs().max(peak2.abs());
        assert!(
            peak_rel <= 1e-6,
            "criterion 3: FAIL - trial {trial} ({family}): peak {peak1} min vs {peak2} min \
             (relative {peak_rel:.2e})"
        );

        // Intervals are anchored to the curve's peak so each query carries
        // measurable mass. A far-tail interval's mass is the difference of
        // two prefix integrals of order one, so below roughly 1e-10 the
        // comparison would measure f64 cancellation noise in both bases
        // rather than the conversion invariance under test.
        let a = (peak1 * rng.random_range(0.25..2.0)).max(1.0);
        let b = a * rng.random_range(1.5..6.0);
        let query = IntervalQuery::new(a, b).unwrap();
        let m1 = interval_probability_with(&c1, query, &domain, grid_n).unwrap();
        let m2 = interval_probability_with(&c2, query, &domain, grid_n).unwrap();
        // The 1e-300 floor only engages when both masses sit below the range
        // where f64 relative error is meaningful (deep subnormal tails).
        let denom = m1.abs().max(m2.abs()).max(1e-300);
        assert!(
            (m1 - m2).abs() / denom <= 1e-6,
            "criterion 3: FAIL - trial {trial} ({family}): interval [{a:.1}, {b:.1}] min \
             mass {m1:.12e} vs {m2:.12e}"
        );
    }
    println!("criterion 3: PASS - 1000 conversion round-trips and query invariances");
}

// --- criterion 4 -----------------------------------------------------------

/// Composite Simpson rule with `n` (even) intervals.
fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    assert!(n >= 2 && n.is_multiple_of(2));
    let h = (b - a) / n as f64;
    let mut sum = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(a + h * i as f64);
    }
    sum * h / 3.0
}

/// Integrates a density to (numerically) full support with a family-tailored
/// change of variable, so the Simpson error stays far below the 1e-6 gate.
fn oracle_total_mass(params: &DistributionParams) -> f64 {
    const N: usize = 20_000;
    let dens = |x: f64| density(params, x).unwrap();
    match *params {
        DistributionParams::Gaussian { mu, sigma } => {
            simpson(dens, mu - 16.0 * sigma, mu + 16.0 * sigma, N)
        }
        DistributionParams::SkewNormal(SkewNormalParams { xi, omega, .. }) => {
            // The skewed tail is still dominated by the Gaussian envelope.
            simpson(dens, xi - 16.0 * omega, xi + 16.0 * omega, N)
        }
        DistributionParams::Exponential { lambda } => simpson(dens, 0.0, 45.0 / lambda, N),
        DistributionParams::LogNormal { mu, sigma } => {
            // u = ln x turns the integrand into a plain Gaussian in u.
            simpson(
                |u: f64| dens(u.exp()) * u.exp(),
                mu - 16.0 * sigma,
                mu + 16.0 * sigma,
                N,
            )
        }
        DistributionParams::Gamma { k, theta } => {
            // x = theta * u^3 removes the x^(k-1) endpoint singularity for
            // every k >= 1, keeping the integrand smooth at u = 0.
            let upper = (k + 40.0 * k.sqrt() + 40.0).cbrt();
            simpson(
                |u: f64| {
                    let x = theta * u * u * u;
                    dens(x) * 3.0 * theta * u * u
                },
                0.0,
                upper,
                N,
            )
        }
    }
}

fn random_valid_params(rng: &mut ChaCha8Rng, family: Family) -> DistributionParams {
    match family {
        Family::Gaussian => DistributionParams::Gaussian {
            mu: rng.random_range(-50.0..150.0),
            sigma: rng.random_range(0.5..30.0),
        },
        Family::Exponential => DistributionParams::Exponential {
            lambda: rng.random_range(0.01..2.0),
        },
        Family::LogNormal => DistributionParams::LogNormal {
            mu: rng.random_range(0.0..5.0),
            sigma: rng.random_range(0.05..1.5),
        },
        Family::Gamma => DistributionParams::Gamma {
            k: rng.random_range(1.0..20.0),
            theta: rng.random_range(0.5..50.0),
        },
        Family::SkewNormal => DistributionParams::SkewNormal(
            SkewNormalParams::new(
                rng.random_range(-50.0..150.0),
                rng.random_range(0.5..30.0),
                rng.random_range(-10.0..10.0),
            )
            .unwrap(),
        ),
    }
}

#[test]
fn criterion_4_distribution_correctness() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xD4);

    // A zero-shape skew normal must be the Gaussian, pointwise.
    let mut points = 0;
    for _ in 0..10 {
        let xi = rng.random_range(-20.0..160.0);
        let omega = rng.random_range(0.3..30.0);
        let sn = DistributionParams::SkewNormal(SkewNormalParams::new(xi, omega, 0.0).unwrap());
        let gauss = DistributionParams::Gaussian {
            mu: xi,
            sigma: omega,
        };
        for i in 0..100 {
            let x = xi + omega * (-8.0 + 16.0 * i as f64 / 99.0);
            let d = (density(&sn, x).unwrap() - density(&gauss, x).unwrap()).abs();
            assert!(
                d <= 1e-12,
                "criterion 4: FAIL - alpha=0 skew normal differs from Gaussian by {d:.2e} \
                 at x={x} (xi={xi}, omega={omega})"
            );
            points += 1;
        }
    }
    assert_eq!(points, 1000);

    // Every family must integrate to one against an independent quadrature.
    for i in 0..100 {
        let family = Family::ALL[i % Family::ALL.len()];
        let params = random_valid_params(&mut rng, family);
        let mass = oracle_total_mass(&params);
        assert!(
            (mass - 1.0).abs() <= 1e-6,
            "criterion 4: FAIL - {family} {params:?} integrates to {mass:.9}, not 1 +- 1e-6"
        );
    }
    println!("criterion 4: PASS - zero-shape reduction pointwise and 100 quadrature checks");
}

// --- criterion 5 -----------------------------------------------------------

/// Draws a ground-truth curve for `family`, returning the parameters plus
/// seven log-axis sample positions that straddle the bulk of the curve.
fn ground_truth(rng: &mut ChaCha8Rng, family: Family) -> (DistributionParams, [f64; 7]) {
    match family {
        Family::Gaussian => {
            let mu = rng.random_range(30.0..130.0);
            let sigma = rng.random_range(4.0..22.0);
            let offsets = [-2.2, -1.3, -0.6, 0.0, 0.6, 1.3, 2.2];
            (
                DistributionParams::Gaussian { mu, sigma },
                offsets.map(|z| mu + sigma * z),
            )
        }
        Family::Exponential => {
            let lambda = rng.random_range(0.03..0.35);
            let offsets = [0.0, 0.3, 0.7, 1.2, 1.8, 2.6, 3.5];
            (
                DistributionParams::Exponential { lambda },
                offsets.map(|u| u / lambda),
            )
        }
        Family::LogNormal => {
            let mu = rng.random_range(2.9..4.3);
            let sigma = rng.random_range(0.18..0.6);
            let offsets = [-2.0, -1.2, -0.5, 0.0, 0.5, 1.2, 2.0];
            (
                DistributionParams::LogNormal { mu, sigma },
                offsets.map(|z| (mu + sigma * z).exp()),
            )
        }
        Family::Gamma => {
            let k: f64 = rng.random_range(3.0..9.0);
            let theta = rng.random_range(4.0..12.0);
            let mean = k * theta;
            let sd = k.sqrt() * theta;
            let offsets = [-1.6, -1.0, -0.5, 0.0, 0.6, 1.3, 2.2];
            (
                DistributionParams::Gamma { k, theta },
                offsets.map(|z| mean + sd * z),
            )
        }
        Family::SkewNormal => {
            let xi = rng.random_range(35.0..120.0);
            let omega = rng.random_range(6.0..22.0);
            let alpha = rng.random_range(-3.2..3.2);
            let offsets = [-2.5, -1.5, -0.7, 0.1, 0.8, 1.6, 2.6];
            (
                DistributionParams::SkewNormal(SkewNormalParams::new(xi, omega, alpha).unwrap()),
                offsets.map(|z| xi + omega * z),
            )
        }
    }
}

/// Asserts every distribution parameter and the amplitude land within 1e-4
/// of the generating values.
fn assert_params_recovered(
    truth: &DistributionParams,
    s_true: f64,
    got: &FitResult,
    context: &str,
) {
    let tol = 1e-4;
    let pairs: Vec<(&str, f64, f64)> = match (*truth, got.params) {
        (
            DistributionParams::Gaussian { mu, sigma },
            DistributionParams::Gaussian { mu: m2, sigma: sd2 },
        ) => vec![("mu", mu, m2), ("sigma", sigma, sd2)],
        (
            DistributionParams::Exponential { lambda },
            DistributionParams::Exponential { lambda: l2 },
        ) => vec![("lambda", lambda, l2)],
        (
            DistributionParams::LogNormal { mu, sigma },
            DistributionParams::LogNormal { mu: m2, sigma: sd2 },
        ) => vec![("mu", mu, m2), ("sigma", sigma, sd2)],
        (
            DistributionParams::Gamma { k, theta },
            DistributionParams::Gamma { k: k2, theta: t2 },
        ) => vec![("k", k, k2), ("theta", theta, t2)],
        (DistributionParams::SkewNormal(p), DistributionParams::SkewNormal(q)) => vec![
            ("xi", p.xi, q.xi),
            ("omega", p.omega, q.omega),
            ("alpha", p.alpha, q.alpha),
        ],
        _ => panic!("criterion 5: FAIL - {context}: family changed during fit"),
    };
    for (name, want, have) in pairs {
        assert!(
            (want - have).abs() <= tol,
            "criterion 5: FAIL - {context}: {name} {want} recovered as {have} \
             (truth {truth:?}, fit {:?}, rmse {:.3e}, converged {}, iterations {})",
            got.params,
            got.rmse,
            got.converged,
            got.iterations
        );
    }
    assert!(
        (got.s_fit - s_true).abs() <= tol,
        "criterion 5: FAIL - {context}: amplitude {s_true} recovered as {}",
        got.s_fit
    );
    assert!(
        got.rmse <= 1e-8,
        "criterion 5: FAIL - {context}: rmse {} above 1e-8",
        got.rmse
    );
}

#[test]
fn criterion_5_fit_self_consistency() {
    // Recovery to 1e-4 with rmse <= 1e-8 needs the solver to run well past
    // its interactive defaults: a barely skewed curve puts a long, nearly
    // flat valley between the best Gaussian approximation (rmse around 1e-6)
    // and the exact solution.
    let options = FitOptions {
        multistart_alphas: vec![-3.0, -1.0, -0.3, 0.0, 0.3, 1.0, 3.0],
        step_tol: 1e-13,
        cost_tol: 1e-16,
        max_nfev: 40_000,
        ..FitOptions::default()
    };
    for (fi, &family) in Family::ALL.iter().enumerate() {
        for seed in 0..50u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add((fi as u64) << 32));
            let (truth, xs) = ground_truth(&mut rng, family);
            let unit: Vec<f64> = xs.iter().map(|&x| density(&truth, x).unwrap()).collect();
            let peak = unit.iter().cloned().fold(f64::MIN, f64::max);
            let s_true = 0.9 / peak * rng.random_range(0.35..1.0);
            let points: Vec<AnnotationPoint> = xs
                .iter()
                .zip(&unit)
                .map(|(&x, &u)| AnnotationPoint::new(x, s_true * u).unwrap())
                .collect();

            let context = format!("{family}, seed {seed}");
            let result = fit(&points, family, &options)
                .unwrap_or_else(|e| panic!("criterion 5: FAIL - {context}: {e}"));
            assert_params_recovered(&truth, s_true, &result, &context);
        }
    }
    println!("criterion 5: PASS - 5 families x 50 seeds recovered at 1e-4 with rmse <= 1e-8");
}

// --- criterion 6 -----------------------------------------------------------

/// Published regression scores (MSE, NLL) for the models the NLL identity is
/// expected to hold for, on both benchmark datasets.
const PUBLISHED_SCORES: [(&str, &str, f64, f64); 8] = [
    ("benchmark-1", "ffnn", 0.8763, 1.3529),
    ("benchmark-1", "bi-lstm", 0.9203, 1.3774),
    ("benchmark-1", "svr", 0.9067, 1.3700),
    ("benchmark-1", "xgboost", 0.8884, 1.3598),
    ("benchmark-2", "ffnn", 0.8715, 1.3502),
    ("benchmark-2", "bi-lstm", 0.8702, 1.3494),
    ("benchmark-2", "svr", 0.8889, 1.3601),
    ("benchmark-2", "xgboost", 0.9580, 1.3975),
];

#[test]
fn criterion_6_regression_metric_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xE6);
    for trial in 0..1000 {
        let n = rng.random_range(8..=60);
        let pred: Vec<f64> = (0..n).map(|_| rng.random_range(-4.0..6.0)).collect();
        let gold: Vec<f64> = (0..n).map(|_| rng.random_range(-4.0..6.0)).collect();
        let report = regression_report(&pred, &gold).unwrap();

        let gap = (report.nll - report.mse / 2.0 - HALF_LN_2PI).abs();
        assert!(
            gap <= 1e-12,
            "criterion 6: FAIL - trial {trial}: NLL - MSE/2 misses ln(2 pi)/2 by {gap:.2e}"
        );
        assert_eq!(
            crps(&pred, &gold).unwrap().to_bits(),
            mae(&pred, &gold).unwrap().to_bits(),
            "criterion 6: FAIL - trial {trial}: CRPS must equal MAE exactly"
        );

        // A strictly increasing map preserves every rank, so the rank
        // correlation must come out of the identical arithmetic.
        let warped: Vec<f64> = pred.iter().map(|&x| x.exp() + x.powi(3)).collect();
        let original = spearman(&pred, &gold).unwrap().expect("non-constant");
        let transformed = spearman(&warped, &gold).unwrap().expect("non-constant");
        assert_eq!(
            original.to_bits(),
            transformed.to_bits(),
            "criterion 6: FAIL - trial {trial}: Spearman changed under a monotone transform"
        );
    }

    // Non-blocking diagnostic: the published scores should satisfy the same
    // NLL identity to within rounding and per-sample variance of the
    // published runs.
    let mut misses = 0;
    for (dataset, model, mse_pub, nll_pub) in PUBLISHED_SCORES {
        let implied = HALF_LN_2PI + mse_pub / 2.0;
        let diff = (nll_pub - implied).abs();
        let verdict = if diff <= 0.03 { "ok" } else { "MISS" };
        if diff > 0.03 {
            misses += 1;
        }
        println!(
            "criterion 6 diagnostic: {dataset} {model}: published nll {nll_pub:.4}, \
             identity implies {implied:.4}, diff {diff:.4} [{verdict}]"
        );
    }
    println!(
        "criterion 6: PASS - 1000 identity trials; diagnostic misses (non-blocking): {misses}"
    );
}

// --- criterion 7 -----------------------------------------------------------

#[test]
fn criterion_7_agreement_oracles() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xF7);

    // Pk of a segmentation against itself is exactly zero.
    for _ in 0..50 {
        let length = rng.random_range(10..200usize);
        let boundaries: Vec<usize> = (1..length)
            .filter(|_| rng.random_range(0..4) == 0)
            .collect();
        let auto = pk(&boundaries, &boundaries, length, None).unwrap();
        assert_eq!(
            auto.value, 0.0,
            "criterion 7: FAIL - Pk of identical segmentations is {}, window {}",
            auto.value, auto.window
        );
        let fixed = pk(&boundaries, &boundaries, length, Some(3)).unwrap();
        assert_eq!(fixed.value, 0.0);
    }

    // ICC of perfectly duplicated raters is one, in both variants.
    for _ in 0..50 {
        let n = rng.random_range(5..50usize);
        // One row per subject; every subject rated identically by 3 raters.
        let ratings: Vec<Vec<f64>> = (0..n)
            .map(|_| vec![rng.random_range(0.0..100.0); 3])
            .collect();
        for variant in [IccVariant::TwoWayRandom, IccVariant::TwoWayMixed] {
            let value = icc(&ratings, variant).unwrap();
            assert!(
                (value - 1.0).abs() <= 1e-12,
                "criterion 7: FAIL - ICC of duplicated raters is {value}, not 1"
            );
        }
    }

    // Hand-computed oracles. Jaccard over {a,b,c} vs {b,c,d}: 2 shared of 4.
    let a: BTreeSet<&str> = ["a", "b", "c"].into();
    let b: BTreeSet<&str> = ["b", "c", "d"].into();
    assert_eq!(jaccard(&a, &b), 0.5);
    let c: BTreeSet<i32> = [1, 2, 3, 4].into();
    let d: BTreeSet<i32> = [3, 4, 5].into();
    assert_eq!(jaccard(&c, &d), 0.4);
    let empty: BTreeSet<i32> = BTreeSet::new();
    assert_eq!(jaccard(&empty, &empty), 1.0);

    // Confusion [[20,5],[10,15]]: p_o = 35/50 = 0.7, p_e = 0.5, kappa = 0.4.
    let confusion = vec![vec![20.0, 5.0], vec![10.0, 15.0]];
    let kappa = cohen_kappa(&confusion).unwrap();
    assert!(
        (kappa - 0.4).abs() <= 1e-12,
        "criterion 7: FAIL - kappa oracle 0.4, got {kappa}"
    );
    assert_eq!(micro_precision(&confusion).unwrap(), 0.7);

    // Merging labels b and c of a 3x3 table. By hand: before, p_o = 60/75
    // and p_e = 0.424, so kappa = 53/78; after, the table is [[10,5],[3,57]]
    // with p_o = 67/75 and p_e = 0.304, so kappa = 37/57.
    let three = vec![
        vec![10.0, 2.0, 3.0],
        vec![1.0, 20.0, 4.0],
        vec![2.0, 3.0, 30.0],
    ];
    let labels: Vec<String> = ["a", "b", "c"].map(String::from).to_vec();
    let before = cohen_kappa(&three).unwrap();
    assert!(
        (before - 0.679_487_179_487_179_5).abs() <= 1e-12,
        "criterion 7: FAIL - pre-merge kappa oracle 53/78, got {before}"
    );
    assert_eq!(micro_precision(&three).unwrap(), 0.8);
    let (merged, merged_labels) = merge_labels(&three, &labels, &[vec![1, 2]]).unwrap();
    assert_eq!(merged_labels, vec!["a".to_string(), "b+c".to_string()]);
    let after = cohen_kappa(&merged).unwrap();
    assert!(
        (after - 0.649_122_807_017_543_9).abs() <= 1e-12,
        "criterion 7: FAIL - post-merge kappa oracle 37/57, got {after}"
    );
    let micro_after = micro_precision(&merged).unwrap();
    assert!(
        (micro_after - 67.0 / 75.0).abs() <= 1e-15,
        "criterion 7: FAIL - post-merge micro-precision oracle 67/75, got {micro_after}"
    );

    println!("criterion 7: PASS - segmentation, ICC, and categorical oracles all exact");
}

// --- criterion 8 -----------------------------------------------------------

/// What a dataset is expected to look like after loading.
struct DatasetExpectation {
    /// Tag for failure messages.
    name: &'static str,
    n: usize,
    /// Expected per-axis sample counts in [`Axis::ALL`] order.
    counts: [usize; 8],
    /// (mean, sd) for location, scale, skewness.
    stats: [[f64; 2]; 3],
    stats_tol: f64,
    /// Expected train/val/test sizes for a 0.7/0.2/0.1 split.
    split: [usize; 3],
    split_tol: usize,
}

const FIXTURE_EXPECTATION: DatasetExpectation = DatasetExpectation {
    name: "bundled 50-sample fixture",
    n: 50,
    counts: [50, 15, 17, 9, 13, 17, 25, 7],
    stats: [
        [53.474092, 20.954713055255564],
        [11.53119, 3.6293962425461572],
        [0.302032, 1.5953586556569628],
    ],
    stats_tol: 1e-9,
    split: [35, 10, 5],
    split_tol: 0,
};

/// Axis counts in [`Axis::ALL`] order: main, intention, opinion,
/// hypothetical, negation, generic, static, recurrent.
const BENCHMARK_1_EXPECTATION: DatasetExpectation = DatasetExpectation {
    name: "benchmark dataset 1",
    n: 1254,
    counts: [1254, 165, 328, 136, 240, 228, 516, 348],
    stats: [[54.2803, 20.4169], [11.5474, 3.7725], [-0.0158, 1.3858]],
    stats_tol: 0.01,
    split: [878, 247, 129],
    split_tol: 1,
};

const BENCHMARK_2_EXPECTATION: DatasetExpectation = DatasetExpectation {
    name: "benchmark dataset 2",
    n: 524,
    counts: [524, 522, 519, 182, 200, 116, 513, 198],
    stats: [[46.1511, 13.3839], [9.5553, 2.5725], [0.0275, 1.1773]],
    stats_tol: 0.01,
    split: [365, 104, 55],
    split_tol: 1,
};

fn check_dataset(samples: &[Sample], exp: &DatasetExpectation) -> Vec<String> {
    let mut failures = Vec::new();
    if samples.len() != exp.n {
        failures.push(format!(
            "{}: loaded {} samples, expected {}",
            exp.name,
            samples.len(),
            exp.n
        ));
    }

    for ((axis, got), &want) in axis_counts(samples).into_iter().zip(&exp.counts) {
        if got != want {
            failures.push(format!(
                "{}: axis {} has {} samples, expected {}",
                exp.name,
                axis.name(),
                got,
                want
            ));
        }
    }

    let stats = zscore_stats(samples).expect("z-score stats");
    let observed = [
        ("location", stats.location.mean, stats.location.sd),
        ("scale", stats.scale.mean, stats.scale.sd),
        ("skewness", stats.skewness.mean, stats.skewness.sd),
    ];
    for ((name, mean, sd), want) in observed.into_iter().zip(&exp.stats) {
        if (mean - want[0]).abs() > exp.stats_tol {
            failures.push(format!(
                "{}: {name} mean {mean:.6} vs expected {:.6} (tol {})",
                exp.name, want[0], exp.stats_tol
            ));
        }
        if (sd - want[1]).abs() > exp.stats_tol {
            failures.push(format!(
                "{}: {name} sd {sd:.6} vs expected {:.6} (tol {})",
                exp.name, want[1], exp.stats_tol
            ));
        }
    }

    let spec = SplitSpec::new(0.7, 0.2, 0.1, 17).unwrap();
    let split = stratified_split(samples, &spec).expect("split");
    let sizes = [split.train.len(), split.val.len(), split.test.len()];
    for ((part, got), &want) in ["train", "val", "test"].iter().zip(sizes).zip(&exp.split) {
        if got.abs_diff(want) > exp.split_tol {
            failures.push(format!(
                "{}: {part} split has {got} samples, expected {want} +-{}",
                exp.name, exp.split_tol
            ));
        }
    }

    // The split must partition the dataset and be reproducible.
    let mut all: Vec<usize> = split
        .train
        .iter()
        .chain(&split.val)
        .chain(&split.test)
        .copied()
        .collect();
    all.sort_unstable();
    if all != (0..samples.len()).collect::<Vec<_>>() {
        failures.push(format!("{}: split is not a partition", exp.name));
    }
    let again = stratified_split(samples, &spec).expect("split");
    if again.train != split.train || again.val != split.val || again.test != split.test {
        failures.push(format!("{}: split is not deterministic", exp.name));
    }

    failures
}

fn fixture_file() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/synthetic_50.jsonl")
}

/// Runs against user-supplied benchmark files when the environment points at
/// them (CHRONOFIT_BENCHMARK_I / CHRONOFIT_BENCHMARK_II), and against the
/// bundled synthetic fixture otherwise.
#[test]
fn criterion_8_dataset_pipeline() {
    let official_1 = std::env::var_os("CHRONOFIT_BENCHMARK_I");
    let official_2 = std::env::var_os("CHRONOFIT_BENCHMARK_II");

    let mut failures = Vec::new();
    let mut ran = Vec::new();

    if official_1.is_none() && official_2.is_none() {
        let report = load_jsonl_path(fixture_file(), None).expect("bundled fixture loads");
        assert!(
            report.warnings.is_empty(),
            "criterion 8: FAIL - fixture load warnings: {:?}",
            report.warnings
        );
        failures.extend(check_dataset(&report.samples, &FIXTURE_EXPECTATION));

        // Sanity on the rest of the pipeline: the fixture is duplicate-free
        // at the default threshold.
        let outcome = dedup_samples(&report.samples, 0.7).unwrap();
        if outcome.kept.len() != report.samples.len() {
            failures.push(format!(
                "fixture: dedup removed {} of {} unique samples",
                outcome.removed.len(),
                report.samples.len()
            ));
        }
        ran.push(FIXTURE_EXPECTATION.name);
    }
    for (var, exp) in [
        (official_1, &BENCHMARK_1_EXPECTATION),
        (official_2, &BENCHMARK_2_EXPECTATION),
    ] {
        if let Some(path) = var {
            let report = load_jsonl_path(&path, None)
                .unwrap_or_else(|e| panic!("criterion 8: FAIL - loading {path:?}: {e}"));
            failures.extend(check_dataset(&report.samples, exp));
            ran.push(exp.name);
        }
    }

    assert!(
        failures.is_empty(),
        "criterion 8: FAIL -\n  {}",
        failures.join("\n  ")
    );
    println!(
        "criterion 8: PASS - dataset pipeline verified against: {}",
        ran.join(", ")
    );
}
