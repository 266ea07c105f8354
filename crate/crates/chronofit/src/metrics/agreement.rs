//! Agreement statistics for annotations: intraclass correlation for ordinal
//! ratings, set overlap, windowed segmentation agreement, and chance-corrected
//! categorical agreement on confusion matrices.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

/// Which intraclass correlation to compute, both for a single rater.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IccVariant {
    /// ICC(2,1): two-way random effects, absolute agreement. Raters are a
    /// random sample, so systematic rater offsets count against agreement.
    TwoWayRandom,
    /// ICC(3,1): two-way mixed effects, consistency. Rater offsets are
    /// treated as fixed and do not count against agreement.
    TwoWayMixed,
}

impl std::fmt::Display for IccVariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            IccVariant::TwoWayRandom => write!(f, "ICC(2,1)"),
            IccVariant::TwoWayMixed => write!(f, "ICC(3,1)"),
        }
    }
}

/// Intraclass correlation over a ratings matrix with one row per subject and
/// one column per rater.
///
/// Needs at least two subjects and two raters. A matrix with no variance at
/// all leaves the coefficient undefined and errors.
pub fn icc(ratings: &[Vec<f64>], variant: IccVariant) -> Result<f64> {
    let n = ratings.len();
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "icc needs at least 2 subjects, got {n}"
        )));
    }
    let k = ratings[0].len();
    if k < 2 {
        return Err(Error::InvalidArgument(format!(
            "icc needs at least 2 raters, got {k}"
        )));
    }
    for (i, row) in ratings.iter().enumerate() {
        if row.len() != k {
            return Err(Error::InvalidArgument(format!(
                "ragged ratings matrix: row {i} has {} entries, expected {k}",
                row.len()
            )));
        }
        if let Some(v) = row.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "non-finite rating {v} in row {i}"
            )));
        }
    }

    let nf = n as f64;
    let kf = k as f64;
    let grand = ratings.iter().flatten().sum::<f64>() / (nf * kf);
    let row_means: Vec<f64> = ratings
        .iter()
        .map(|row| row.iter().sum::<f64>() / kf)
        .collect();
    let col_means: Vec<f64> = (0..k)
        .map(|j| ratings.iter().map(|row| row[j]).sum::<f64>() / nf)
        .collect();

    let ss_total: f64 = ratings
        .iter()
        .flatten()
        .map(|&v| (v - grand) * (v - grand))
        .sum();
    let ss_rows: f64 = kf
        * row_means
            .iter()
            .map(|&m| (m - grand) * (m - grand))
            .sum::<f64>();
    let ss_cols: f64 = nf
        * col_means
            .iter()
            .map(|&m| (m - grand) * (m - grand))
            .sum::<f64>();
    let ss_err = (ss_total - ss_rows - ss_cols).max(0.0);

    let ms_rows = ss_rows / (nf - 1.0);
    let ms_cols = ss_cols / (kf - 1.0);
    let ms_err = ss_err / ((nf - 1.0) * (kf - 1.0));

    let denom = match variant {
        IccVariant::TwoWayRandom => ms_rows + (kf - 1.0) * ms_err + kf * (ms_cols - ms_err) / nf,
        IccVariant::TwoWayMixed => ms_rows + (kf - 1.0) * ms_err,
    };
    let value = (ms_rows - ms_err) / denom;
    if !value.is_finite() {
        return Err(Error::Numeric(
            "icc undefined: ratings matrix has no variance".into(),
        ));
    }
    Ok(value)
}

/// Jaccard similarity of two sets. Two empty sets agree perfectly, giving 1.
pub fn jaccard<T: Ord>(a: &BTreeSet<T>, b: &BTreeSet<T>) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 1.0;
    }
    let inter = a.intersection(b).count();
    let union = a.union(b).count();
    inter as f64 / union as f64
}

/// Outcome of the Pₖ sliding-window segmentation comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PkResult {
    /// Fraction of window placements where reference and hypothesis disagree
    /// about whether the window endpoints share a segment. 0 is perfect.
    pub value: f64,
    /// Window width actually used.
    pub window: usize,
}

/// Pₖ segmentation penalty between a reference and a hypothesis.
///
/// Both segmentations are given as sorted boundary positions in
/// `1..length`, where a boundary at `b` splits units `b-1` and `b`. When
/// `window` is `None` the customary default of half the mean reference
/// segment length (at least 2) is used.
pub fn pk(
    reference: &[usize],
    hypothesis: &[usize],
    length: usize,
    window: Option<usize>,
) -> Result<PkResult> {
    if length < 2 {
        return Err(Error::InvalidArgument(format!(
            "segmented sequence must have at least 2 units, got {length}"
        )));
    }
    check_boundaries(reference, length, "reference")?;
    check_boundaries(hypothesis, length, "hypothesis")?;

    let k = match window {
        Some(k) => k,
        None => {
            let segments = (reference.len() + 1) as f64;
            ((length as f64 / (2.0 * segments)).round() as usize).max(2)
        }
    };
    if k == 0 || k >= length {
        return Err(Error::InvalidArgument(format!(
            "window must be in 1..{length}, got {k}"
        )));
    }

    let cum_ref = prefix_counts(reference, length);
    let cum_hyp = prefix_counts(hypothesis, length);
    let mut disagreements = 0usize;
    for i in 0..(length - k) {
        let same_ref = cum_ref[i + k] == cum_ref[i];
        let same_hyp = cum_hyp[i + k] == cum_hyp[i];
        if same_ref != same_hyp {
            disagreements += 1;
        }
    }
    Ok(PkResult {
        value: disagreements as f64 / (length - k) as f64,
        window: k,
    })
}

fn check_boundaries(boundaries: &[usize], length: usize, side: &str) -> Result<()> {
    for (i, &b) in boundaries.iter().enumerate() {
        if b == 0 || b >= length {
            return Err(Error::InvalidArgument(format!(
                "{side} boundary {b} outside 1..{length}"
            )));
        }
        if i > 0 && boundaries[i - 1] >= b {
            return Err(Error::InvalidArgument(format!(
                "{side} boundaries must be strictly increasing"
            )));
        }
    }
    Ok(())
}

/// `counts[p]` = number of boundaries at positions `<= p`.
fn prefix_counts(boundaries: &[usize], length: usize) -> Vec<usize> {
    let mut counts = vec![0usize; length + 1];
    let mut seen = 0usize;
    let mut next = 0usize;
    for (p, slot) in counts.iter_mut().enumerate() {
        while next < boundaries.len() && boundaries[next] <= p {
            seen += 1;
            next += 1;
        }
        *slot = seen;
    }
    counts
}

fn check_confusion(confusion: &[Vec<f64>]) -> Result<f64> {
    let n = confusion.len();
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "confusion matrix needs at least 2 classes, got {n}"
        )));
    }
    let mut total = 0.0;
    for (i, row) in confusion.iter().enumerate() {
        if row.len() != n {
            return Err(Error::InvalidArgument(format!(
                "confusion matrix must be square: row {i} has {} entries, expected {n}",
                row.len()
            )));
        }
        for &v in row {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "confusion counts must be finite and nonnegative, got {v} in row {i}"
                )));
            }
            total += v;
        }
    }
    if total <= 0.0 {
        return Err(Error::InvalidArgument("confusion matrix is empty".into()));
    }
    Ok(total)
}

/// Cohen's kappa from a square confusion matrix (rows: first annotator,
/// columns: second).
///
/// Errors when expected chance agreement reaches 1, where the correction
/// divides by zero.
pub fn cohen_kappa(confusion: &[Vec<f64>]) -> Result<f64> {
    let total = check_confusion(confusion)?;
    let n = confusion.len();
    let p_o: f64 = (0..n).map(|i| confusion[i][i]).sum::<f64>() / total;
    let p_e: f64 = (0..n)
        .map(|i| {
            let row: f64 = confusion[i].iter().sum();
            let col: f64 = confusion.iter().map(|r| r[i]).sum();
            row * col
        })
        .sum::<f64>()
        / (total * total);
    if (1.0 - p_e).abs() < 1e-12 {
        return Err(Error::Numeric(
            "kappa undefined: chance agreement is 1".into(),
        ));
    }
    Ok((p_o - p_e) / (1.0 - p_e))
}

/// Micro-averaged precision of a confusion matrix: the diagonal mass over the
/// total mass. With one prediction per item this equals accuracy.
pub fn micro_precision(confusion: &[Vec<f64>]) -> Result<f64> {
    let total = check_confusion(confusion)?;
    let trace: f64 = (0..confusion.len()).map(|i| confusion[i][i]).sum();
    Ok(trace / total)
}

/// Collapses groups of labels in a confusion matrix by summing their rows and
/// columns.
///
/// Each group lists at least two distinct label indices; an index may appear
/// in at most one group. The merged entry takes the position of the group's
/// first listed member and a name joining the member labels with `+`.
pub fn merge_labels(
    confusion: &[Vec<f64>],
    labels: &[String],
    groups: &[Vec<usize>],
) -> Result<(Vec<Vec<f64>>, Vec<String>)> {
    check_confusion(confusion)?;
    let n = confusion.len();
    if labels.len() != n {
        return Err(Error::InvalidArgument(format!(
            "expected {n} labels, got {}",
            labels.len()
        )));
    }

    // repr[i] = index whose output slot absorbs label i.
    let mut repr: Vec<usize> = (0..n).collect();
    let mut claimed = vec![false; n];
    for group in groups {
        if group.len() < 2 {
            return Err(Error::InvalidArgument(
                "merge groups need at least two labels".into(),
            ));
        }
        for &idx in group {
            if idx >= n {
                return Err(Error::InvalidArgument(format!(
                    "merge index {idx} out of range for {n} labels"
                )));
            }
            if claimed[idx] {
                return Err(Error::InvalidArgument(format!(
                    "label {:?} appears in more than one merge group",
                    labels[idx]
                )));
            }
            claimed[idx] = true;
            repr[idx] = group[0];
        }
    }

    // Surviving old indices in original order, and their new positions.
    let survivors: Vec<usize> = (0..n).filter(|&i| repr[i] == i).collect();
    let mut new_pos = vec![usize::MAX; n];
    for (pos, &old) in survivors.iter().enumerate() {
        new_pos[old] = pos;
    }

    let m = survivors.len();
    let mut merged = vec![vec![0.0; m]; m];
    for i in 0..n {
        for j in 0..n {
            merged[new_pos[repr[i]]][new_pos[repr[j]]] += confusion[i][j];
        }
    }

    let mut names: Vec<String> = survivors.iter().map(|&i| labels[i].clone()).collect();
    for group in groups {
        names[new_pos[group[0]]] = group
            .iter()
            .map(|&i| labels[i].as_str())
            .collect::<Vec<_>>()
            .join("+");
    }
    Ok((merged, names))
}
