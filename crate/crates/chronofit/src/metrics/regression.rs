//! Error measures for paired prediction/target series.
//!
//! All functions take predictions and targets of equal, nonzero length and
//! reject non-finite entries up front. Metrics whose value is undefined for
//! degenerate inputs (constant targets, tied-everywhere ranks) report `None`
//! rather than guessing.

use serde::Serialize;

use crate::error::{Error, Result};

/// ln(2π), the additive constant of the unit-variance Gaussian likelihood.
const LN_2PI: f64 = 1.837_877_066_409_345_3;

/// Metrics for one prediction/target pairing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegressionReport {
    pub n: usize,
    pub mse: f64,
    pub mae: f64,
    /// Coefficient of determination; `None` when the targets are constant.
    pub r2: Option<f64>,
    /// Spearman rank correlation; `None` when either side is constant.
    pub spearman: Option<f64>,
    /// Negative log-likelihood under a unit-variance Gaussian predictive
    /// distribution: `ln(2π)/2 + MSE/2`.
    pub nll: f64,
    /// CRPS of a point forecast, which collapses to the absolute error.
    pub crps: f64,
}

fn check_paired(pred: &[f64], gold: &[f64]) -> Result<()> {
    if pred.is_empty() {
        return Err(Error::InvalidArgument(
            "metric inputs must be nonempty".into(),
        ));
    }
    if pred.len() != gold.len() {
        return Err(Error::InvalidArgument(format!(
            "prediction/target length mismatch: {} vs {}",
            pred.len(),
            gold.len()
        )));
    }
    for (i, (&p, &g)) in pred.iter().zip(gold).enumerate() {
        if !p.is_finite() || !g.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "non-finite value in pair {i}: ({p}, {g})"
            )));
        }
    }
    Ok(())
}

/// Mean squared error.
pub fn mse(pred: &[f64], gold: &[f64]) -> Result<f64> {
    check_paired(pred, gold)?;
    let ss: f64 = pred
        .iter()
        .zip(gold)
        .map(|(&p, &g)| (p - g) * (p - g))
        .sum();
    Ok(ss / pred.len() as f64)
}

/// Mean absolute error.
pub fn mae(pred: &[f64], gold: &[f64]) -> Result<f64> {
    check_paired(pred, gold)?;
    let sum: f64 = pred.iter().zip(gold).map(|(&p, &g)| (p - g).abs()).sum();
    Ok(sum / pred.len() as f64)
}

/// Coefficient of determination `1 - SS_res / SS_tot`.
///
/// `None` when the targets are all identical, where the total sum of squares
/// vanishes and the ratio is meaningless.
pub fn r2(pred: &[f64], gold: &[f64]) -> Result<Option<f64>> {
    check_paired(pred, gold)?;
    if gold.iter().all(|&g| g == gold[0]) {
        return Ok(None);
    }
    let mean = gold.iter().sum::<f64>() / gold.len() as f64;
    let ss_res: f64 = pred
        .iter()
        .zip(gold)
        .map(|(&p, &g)| (p - g) * (p - g))
        .sum();
    let ss_tot: f64 = gold.iter().map(|&g| (g - mean) * (g - mean)).sum();
    if ss_tot == 0.0 {
        return Ok(None);
    }
    Ok(Some(1.0 - ss_res / ss_tot))
}

/// Spearman rank correlation with average ranks for ties.
///
/// `None` when either series is constant, where ranks carry no order
/// information. Because it only sees ranks, the value is invariant under any
/// strictly increasing transformation of either series.
pub fn spearman(pred: &[f64], gold: &[f64]) -> Result<Option<f64>> {
    check_paired(pred, gold)?;
    if pred.iter().all(|&v| v == pred[0]) || gold.iter().all(|&v| v == gold[0]) {
        return Ok(None);
    }
    let ra = ranks(pred);
    let rb = ranks(gold);
    Ok(pearson(&ra, &rb))
}

/// Negative log-likelihood of the targets under independent unit-variance
/// Gaussians centered on the predictions: `ln(2π)/2 + MSE/2`.
pub fn nll(pred: &[f64], gold: &[f64]) -> Result<f64> {
    Ok(0.5 * LN_2PI + 0.5 * mse(pred, gold)?)
}

/// Continuous ranked probability score of a deterministic (point) forecast,
/// which equals the mean absolute error.
pub fn crps(pred: &[f64], gold: &[f64]) -> Result<f64> {
    mae(pred, gold)
}

/// All regression metrics in one pass.
pub fn regression_report(pred: &[f64], gold: &[f64]) -> Result<RegressionReport> {
    check_paired(pred, gold)?;
    let mse_v = mse(pred, gold)?;
    let mae_v = mae(pred, gold)?;
    Ok(RegressionReport {
        n: pred.len(),
        mse: mse_v,
        mae: mae_v,
        r2: r2(pred, gold)?,
        spearman: spearman(pred, gold)?,
        nll: 0.5 * LN_2PI + 0.5 * mse_v,
        crps: mae_v,
    })
}

/// 1-based ranks with ties receiving the average of their positions.
fn ranks(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).expect("finite values"));
    let mut out = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            out[k] = avg;
        }
        i = j + 1;
    }
    out
}

fn pearson(a: &[f64], b: &[f64]) -> Option<f64> {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let mut sab = 0.0;
    let mut saa = 0.0;
    let mut sbb = 0.0;
    for (&x, &y) in a.iter().zip(b) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma) * (x - ma);
        sbb += (y - mb) * (y - mb);
    }
    if saa == 0.0 || sbb == 0.0 {
        return None;
    }
    Some((sab / (saa * sbb).sqrt()).clamp(-1.0, 1.0))
}
