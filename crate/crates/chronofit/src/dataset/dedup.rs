//! Near-duplicate removal by TF-IDF cosine similarity.
//!
//! Texts are lowercased and split on every non-alphanumeric character; term
//! weights are raw counts times `ln(N / df)` with document frequencies taken
//! over the whole input. Scanning in input order, a text is dropped when its
//! cosine against any earlier kept text exceeds the threshold, so the first
//! occurrence of a duplicate group survives.
//!
//! When two texts share only corpus-wide terms their TF-IDF vectors are both
//! zero (`ln(N/N) = 0`); the comparison falls back to raw term counts so that
//! verbatim repeats are still caught.

use std::collections::BTreeMap;

use crate::dataset::Sample;
use crate::error::{Error, Result};

/// A removed text and the earlier kept text that triggered the removal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DuplicatePair {
    pub removed: usize,
    pub kept: usize,
    pub cosine: f64,
}

/// Indices that survive deduplication plus the removal evidence.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DedupOutcome {
    /// Kept indices, ascending.
    pub kept: Vec<usize>,
    pub removed: Vec<DuplicatePair>,
}

type Counts = BTreeMap<String, f64>;

/// Deduplicates texts at a cosine threshold in (0, 1].
pub fn dedup_texts<S: AsRef<str>>(texts: &[S], threshold: f64) -> Result<DedupOutcome> {
    if !(threshold > 0.0 && threshold <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "dedup threshold must be in (0, 1], got {threshold}"
        )));
    }
    let n = texts.len();
    if n == 0 {
        return Ok(DedupOutcome::default());
    }

    let tf: Vec<Counts> = texts.iter().map(|t| term_counts(t.as_ref())).collect();
    let mut df: BTreeMap<&str, f64> = BTreeMap::new();
    for counts in &tf {
        for term in counts.keys() {
            *df.entry(term).or_insert(0.0) += 1.0;
        }
    }
    let weights: Vec<Counts> = tf
        .iter()
        .map(|counts| {
            counts
                .iter()
                .map(|(term, &c)| (term.clone(), c * (n as f64 / df[term.as_str()]).ln()))
                .collect()
        })
        .collect();

    let mut outcome = DedupOutcome::default();
    for j in 0..n {
        let mut duplicate_of = None;
        for &i in &outcome.kept {
            let cos = pair_cosine(&weights[i], &weights[j], &tf[i], &tf[j]);
            if cos > threshold {
                duplicate_of = Some((i, cos));
                break;
            }
        }
        match duplicate_of {
            Some((kept, cosine)) => outcome.removed.push(DuplicatePair {
                removed: j,
                kept,
                cosine,
            }),
            None => outcome.kept.push(j),
        }
    }
    Ok(outcome)
}

/// [`dedup_texts`] over the samples' source texts.
pub fn dedup_samples(samples: &[Sample], threshold: f64) -> Result<DedupOutcome> {
    let texts: Vec<&str> = samples.iter().map(|s| s.parent_text.as_str()).collect();
    dedup_texts(&texts, threshold)
}

fn term_counts(text: &str) -> Counts {
    let mut counts = Counts::new();
    for token in text
        .to_lowercase()
        .split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
    {
        *counts.entry(token.to_string()).or_insert(0.0) += 1.0;
    }
    counts
}

fn dot(a: &Counts, b: &Counts) -> f64 {
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    small
        .iter()
        .filter_map(|(term, &va)| large.get(term).map(|&vb| va * vb))
        .sum()
}

fn norm(v: &Counts) -> f64 {
    v.values().map(|&w| w * w).sum::<f64>().sqrt()
}

fn pair_cosine(wa: &Counts, wb: &Counts, ta: &Counts, tb: &Counts) -> f64 {
    let (na, nb) = (norm(wa), norm(wb));
    if na == 0.0 && nb == 0.0 {
        // No discriminative terms on either side: compare raw counts.
        let (ra, rb) = (norm(ta), norm(tb));
        if ra == 0.0 && rb == 0.0 {
            return 1.0; // two token-free texts are identical
        }
        if ra == 0.0 || rb == 0.0 {
            return 0.0;
        }
        return (dot(ta, tb) / (ra * rb)).min(1.0);
    }
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    // Rounding can nudge identical vectors past 1; the mathematical range
    // of a cosine over nonnegative weights is [0, 1].
    (dot(wa, wb) / (na * nb)).min(1.0)
}
