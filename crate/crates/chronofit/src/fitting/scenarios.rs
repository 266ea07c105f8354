//! Bundled benchmark scenarios for family comparison.
//!
//! Six synthetic, unimodal validity profiles that vary onset, duration, and
//! asymmetry, each annotated with five points on the base-1.1 log-time axis.
//! Published reference RMSE values for all five candidate families accompany
//! the points so that a fresh build can verify it reproduces the original
//! comparison: the skew-normal should win every scenario and the exponential
//! should lose every one.

use super::{fit, AnnotationPoint, FitOptions};
use crate::distributions::Family;
use crate::error::Result;

pub const SCENARIO_COUNT: usize = 6;

/// Scenario identifiers, in fixture order.
pub const SCENARIO_LABELS: [&str; SCENARIO_COUNT] = ["S1", "S2", "S3", "S4", "S5", "S6"];

/// What each scenario exercises.
pub const SCENARIO_TITLES: [&str; SCENARIO_COUNT] = [
    "Early Onset",
    "Late Onset",
    "Short Duration",
    "Long Duration",
    "Rapid Rise, Slow Decay",
    "Slow Rise, Rapid Decay",
];

/// Family column order used by scenario tables.
pub const FAMILY_ORDER: [Family; 5] = [
    Family::Gaussian,
    Family::Exponential,
    Family::LogNormal,
    Family::Gamma,
    Family::SkewNormal,
];

const POINTS: [[AnnotationPoint; 5]; SCENARIO_COUNT] = [
    [
        AnnotationPoint { x: 14.91, y: 0.19 },
        AnnotationPoint { x: 21.64, y: 0.41 },
        AnnotationPoint { x: 27.64, y: 0.77 },
        AnnotationPoint { x: 31.64, y: 0.41 },
        AnnotationPoint { x: 34.91, y: 0.20 },
    ],
    [
        AnnotationPoint { x: 93.75, y: 0.21 },
        AnnotationPoint { x: 100.67, y: 0.80 },
        AnnotationPoint { x: 106.57, y: 0.42 },
        AnnotationPoint { x: 112.73, y: 0.20 },
        AnnotationPoint { x: 98.0, y: 0.63 },
    ],
    [
        AnnotationPoint { x: 12.73, y: 0.21 },
        AnnotationPoint { x: 28.19, y: 0.80 },
        AnnotationPoint { x: 41.28, y: 0.20 },
        AnnotationPoint { x: 32.19, y: 0.60 },
        AnnotationPoint { x: 18.91, y: 0.40 },
    ],
    [
        AnnotationPoint { x: 1.0, y: 0.05 },
        AnnotationPoint { x: 130.38, y: 0.81 },
        AnnotationPoint { x: 147.84, y: 0.21 },
        AnnotationPoint { x: 111.29, y: 0.42 },
        AnnotationPoint { x: 138.38, y: 0.60 },
    ],
    [
        AnnotationPoint { x: 42.73, y: 0.21 },
        AnnotationPoint { x: 46.91, y: 0.40 },
        AnnotationPoint { x: 53.10, y: 0.80 },
        AnnotationPoint { x: 63.46, y: 0.56 },
        AnnotationPoint { x: 81.83, y: 0.27 },
    ],
    [
        AnnotationPoint { x: 43.28, y: 0.20 },
        AnnotationPoint { x: 58.01, y: 0.40 },
        AnnotationPoint { x: 76.92, y: 0.79 },
        AnnotationPoint { x: 84.92, y: 0.40 },
        AnnotationPoint { x: 88.92, y: 0.17 },
    ],
];

/// Published reference RMSE per scenario (rows) and family (columns, in
/// [`FAMILY_ORDER`]).
pub const REFERENCE_RMSE: [[f64; 5]; SCENARIO_COUNT] = [
    [0.0709, 0.2103, 0.0844, 0.0827, 0.0514],
    [0.0673, 0.2291, 0.0597, 0.0623, 0.0357],
    [0.0424, 0.2312, 0.0804, 0.0668, 0.0407],
    [0.0273, 0.2704, 0.0325, 0.0307, 0.0224],
    [0.1193, 0.2126, 0.0872, 0.0968, 0.0505],
    [0.0806, 0.2212, 0.0919, 0.0899, 0.0247],
];

/// The five annotation points of scenario `idx` (0-based).
pub fn scenario_points(idx: usize) -> &'static [AnnotationPoint; 5] {
    &POINTS[idx]
}

/// RMSE of every family on every scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioTable {
    /// `rmse[scenario][family]`, columns in [`FAMILY_ORDER`].
    pub rmse: [[f64; 5]; SCENARIO_COUNT],
}

impl ScenarioTable {
    /// Family with the lowest RMSE in a scenario row.
    pub fn best_family(&self, scenario: usize) -> Family {
        let row = &self.rmse[scenario];
        let mut best = 0;
        for j in 1..row.len() {
            if row[j] < row[best] {
                best = j;
            }
        }
        FAMILY_ORDER[best]
    }

    /// Family with the highest RMSE in a scenario row.
    pub fn worst_family(&self, scenario: usize) -> Family {
        let row = &self.rmse[scenario];
        let mut worst = 0;
        for j in 1..row.len() {
            if row[j] > row[worst] {
                worst = j;
            }
        }
        FAMILY_ORDER[worst]
    }

    /// True when the named family's RMSE is strictly below every other
    /// family's in the given scenario.
    pub fn strictly_best(&self, scenario: usize, family: Family) -> bool {
        let row = &self.rmse[scenario];
        let fi = FAMILY_ORDER.iter().position(|&f| f == family).unwrap();
        row.iter().enumerate().all(|(j, &v)| j == fi || row[fi] < v)
    }

    /// True when the named family's RMSE is strictly above every other
    /// family's in the given scenario.
    pub fn strictly_worst(&self, scenario: usize, family: Family) -> bool {
        let row = &self.rmse[scenario];
        let fi = FAMILY_ORDER.iter().position(|&f| f == family).unwrap();
        row.iter().enumerate().all(|(j, &v)| j == fi || row[fi] > v)
    }
}

/// Fits all five families to all six bundled scenarios with default options.
pub fn run_scenarios() -> Result<ScenarioTable> {
    let options = FitOptions::default();
    let mut rmse = [[0.0; 5]; SCENARIO_COUNT];
    for (s, points) in POINTS.iter().enumerate() {
        for (f, &family) in FAMILY_ORDER.iter().enumerate() {
            rmse[s][f] = fit(points, family, &options)?.rmse;
        }
    }
    Ok(ScenarioTable { rmse })
}
