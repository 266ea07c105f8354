//! Seeded train/validation/test splitting with iterative stratification over
//! the annotation axes.
//!
//! Samples carry several axes at once, so plain stratified sampling does not
//! apply. The split assigns samples label by label, rarest label first, each
//! time placing the sample where that label is furthest below its quota.
//! This keeps every axis close to its overall prevalence in all three
//! subsets, which matters for rare axes that a uniform shuffle can easily
//! starve.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dataset::{Axis, Sample};
use crate::error::{Error, Result};

/// Split fractions and the RNG seed that fixes the outcome.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitSpec {
    pub train: f64,
    pub val: f64,
    pub test: f64,
    pub seed: u64,
}

impl SplitSpec {
    /// Fractions must each lie in (0, 1) and sum to 1.
    pub fn new(train: f64, val: f64, test: f64, seed: u64) -> Result<Self> {
        for (name, f) in [("train", train), ("val", val), ("test", test)] {
            if !f.is_finite() || f <= 0.0 || f >= 1.0 {
                return Err(Error::InvalidArgument(format!(
                    "{name} fraction must be in (0, 1), got {f}"
                )));
            }
        }
        let sum = train + val + test;
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidArgument(format!(
                "split fractions must sum to 1, got {sum}"
            )));
        }
        Ok(SplitSpec {
            train,
            val,
            test,
            seed,
        })
    }
}

/// Indices into the input slice, each subset in original input order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitIndices {
    pub train: Vec<usize>,
    pub val: Vec<usize>,
    pub test: Vec<usize>,
}

/// Splits samples into train/val/test by iterative stratification.
///
/// Subset sizes are fixed up front from the fractions by largest-remainder
/// rounding; a fraction that rounds to an empty subset is an error. The same
/// seed on the same input always produces the same split.
pub fn stratified_split(samples: &[Sample], spec: &SplitSpec) -> Result<SplitIndices> {
    let n = samples.len();
    let mut caps = capacities(n, [spec.train, spec.val, spec.test])?;

    // desire[axis][j]: how many more samples with this axis subset j wants.
    let mut desire = [[0.0f64; 3]; Axis::ALL.len()];
    for (a, axis) in Axis::ALL.into_iter().enumerate() {
        let count = samples
            .iter()
            .filter(|s| !s.axes.get(axis).is_empty())
            .count() as f64;
        for (j, p) in [spec.train, spec.val, spec.test].into_iter().enumerate() {
            desire[a][j] = count * p;
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut assignment = vec![usize::MAX; n];
    let mut unassigned = n;

    while unassigned > 0 {
        // Rarest axis that still has unassigned samples; fixed axis order
        // breaks count ties.
        let mut pick: Option<(usize, usize)> = None;
        for (a, axis) in Axis::ALL.into_iter().enumerate() {
            let remaining = (0..n)
                .filter(|&i| assignment[i] == usize::MAX && !samples[i].axes.get(axis).is_empty())
                .count();
            if remaining > 0 && pick.is_none_or(|(_, best)| remaining < best) {
                pick = Some((a, remaining));
            }
        }
        match pick {
            Some((a, _)) => {
                let axis = Axis::ALL[a];
                let mut pool: Vec<usize> = (0..n)
                    .filter(|&i| {
                        assignment[i] == usize::MAX && !samples[i].axes.get(axis).is_empty()
                    })
                    .collect();
                pool.shuffle(&mut rng);
                for i in pool {
                    let j = choose_subset(&desire, a, &caps, &mut rng);
                    assign(i, j, samples, &mut assignment, &mut caps, &mut desire);
                    unassigned -= 1;
                }
            }
            None => {
                // Label-free samples: fill whatever capacity is left,
                // largest first for determinism.
                for i in 0..n {
                    if assignment[i] != usize::MAX {
                        continue;
                    }
                    let j = (0..3)
                        .max_by_key(|&j| (caps[j], 2 - j))
                        .expect("three subsets");
                    assign(i, j, samples, &mut assignment, &mut caps, &mut desire);
                    unassigned -= 1;
                }
            }
        }
    }

    let collect = |j: usize| -> Vec<usize> { (0..n).filter(|&i| assignment[i] == j).collect() };
    Ok(SplitIndices {
        train: collect(0),
        val: collect(1),
        test: collect(2),
    })
}

fn capacities(n: usize, fractions: [f64; 3]) -> Result<[usize; 3]> {
    let raw = fractions.map(|p| p * n as f64);
    let mut caps = raw.map(|r| r.floor() as usize);
    let assigned: usize = caps.iter().sum();
    let mut order: Vec<usize> = (0..3).collect();
    order.sort_by(|&a, &b| {
        let fa = raw[a] - raw[a].floor();
        let fb = raw[b] - raw[b].floor();
        fb.partial_cmp(&fa).unwrap().then(a.cmp(&b))
    });
    for k in 0..(n - assigned) {
        caps[order[k % 3]] += 1;
    }
    if caps.contains(&0) {
        return Err(Error::InvalidArgument(format!(
            "split of {n} samples leaves an empty subset (sizes {caps:?})"
        )));
    }
    Ok(caps)
}

/// Subset with the largest remaining desire for axis `a` among those with
/// capacity, then largest total desire, then the RNG.
fn choose_subset(
    desire: &[[f64; 3]; Axis::ALL.len()],
    a: usize,
    caps: &[usize; 3],
    rng: &mut ChaCha8Rng,
) -> usize {
    let open: Vec<usize> = (0..3).filter(|&j| caps[j] > 0).collect();
    debug_assert!(!open.is_empty(), "capacities cannot all be exhausted early");
    let best = open
        .iter()
        .map(|&j| desire[a][j])
        .fold(f64::NEG_INFINITY, f64::max);
    let tied: Vec<usize> = open.into_iter().filter(|&j| desire[a][j] == best).collect();
    if tied.len() == 1 {
        return tied[0];
    }
    let total = |j: usize| -> f64 { (0..Axis::ALL.len()).map(|l| desire[l][j]).sum() };
    let best_total = tied
        .iter()
        .map(|&j| total(j))
        .fold(f64::NEG_INFINITY, f64::max);
    let tied: Vec<usize> = tied
        .into_iter()
        .filter(|&j| total(j) == best_total)
        .collect();
    if tied.len() == 1 {
        tied[0]
    } else {
        tied[rng.random_range(0..tied.len())]
    }
}

fn assign(
    i: usize,
    j: usize,
    samples: &[Sample],
    assignment: &mut [usize],
    caps: &mut [usize; 3],
    desire: &mut [[f64; 3]; Axis::ALL.len()],
) {
    assignment[i] = j;
    caps[j] -= 1;
    for (a, axis) in Axis::ALL.into_iter().enumerate() {
        if !samples[i].axes.get(axis).is_empty() {
            desire[a][j] -= 1.0;
        }
    }
}
