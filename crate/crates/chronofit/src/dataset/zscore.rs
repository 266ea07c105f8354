//! Standardization of target parameters across a dataset.
//!
//! Statistics use the sample standard deviation (ddof = 1). Standardized
//! scale values can be negative or zero, so they travel in a separate
//! [`ZScores`] type rather than reusing [`TargetParams`], whose scale is
//! strictly positive.

use serde::{Deserialize, Serialize};

use crate::dataset::{Sample, TargetParams};
use crate::error::{Error, Result};

/// Mean and sample standard deviation of one parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamStats {
    pub mean: f64,
    pub sd: f64,
}

/// Per-parameter statistics of a dataset's targets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZScoreStats {
    pub location: ParamStats,
    pub scale: ParamStats,
    pub skewness: ParamStats,
}

/// A standardized target.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZScores {
    pub location: f64,
    pub scale: f64,
    pub skewness: f64,
}

fn stats_of(values: &[f64]) -> ParamStats {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    ParamStats {
        mean,
        sd: (ss / (n - 1.0)).sqrt(),
    }
}

/// Target statistics over a dataset. Needs at least two samples.
pub fn zscore_stats(samples: &[Sample]) -> Result<ZScoreStats> {
    if samples.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "standardization needs at least 2 samples, got {}",
            samples.len()
        )));
    }
    let column = |f: fn(&TargetParams) -> f64| -> Vec<f64> {
        samples.iter().map(|s| f(&s.target)).collect()
    };
    Ok(ZScoreStats {
        location: stats_of(&column(|t| t.location)),
        scale: stats_of(&column(|t| t.scale)),
        skewness: stats_of(&column(|t| t.skewness)),
    })
}

/// Standardizes one target. Errors when any parameter is constant across the
/// dataset (zero standard deviation).
pub fn standardize(stats: &ZScoreStats, target: &TargetParams) -> Result<ZScores> {
    for (name, s) in [
        ("location", stats.location),
        ("scale", stats.scale),
        ("skewness", stats.skewness),
    ] {
        if s.sd == 0.0 {
            return Err(Error::Numeric(format!(
                "cannot standardize: {name} is constant across the dataset"
            )));
        }
    }
    Ok(ZScores {
        location: (target.location - stats.location.mean) / stats.location.sd,
        scale: (target.scale - stats.scale.mean) / stats.scale.sd,
        skewness: (target.skewness - stats.skewness.mean) / stats.skewness.sd,
    })
}

/// Maps standardized values back to raw target parameters.
///
/// Errors when the reconstructed scale is not positive, which happens for
/// z-scores far below the dataset mean; such values cannot be a valid
/// curve width.
pub fn destandardize(stats: &ZScoreStats, z: &ZScores) -> Result<TargetParams> {
    let scale = stats.scale.mean + z.scale * stats.scale.sd;
    if scale <= 0.0 {
        return Err(Error::Numeric(format!(
            "standardized scale {} inverts to nonpositive width {scale}",
            z.scale
        )));
    }
    Ok(TargetParams {
        location: stats.location.mean + z.location * stats.location.sd,
        scale,
        skewness: stats.skewness.mean + z.skewness * stats.skewness.sd,
    })
}
