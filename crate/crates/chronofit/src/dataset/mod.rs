//! Annotated-sample I/O and dataset utilities.
//!
//! A sample pairs a source text with spans on eight temporal axes and a
//! skew-normal validity target (location, scale, skewness) expressed on a
//! logarithmic time axis. Files are JSON Lines, one sample per line:
//!
//! ```json
//! {"id":"s-1","parent_text":"...","axes":{"main":["..."],"negation":["not"]},
//!  "target":{"location":54.0,"scale":11.0,"skewness":-0.2},"log_base":1.1}
//! ```
//!
//! Absent axis keys mean "no spans"; unknown axis keys are data errors while
//! unknown top-level keys only produce warnings, so enriched exports still
//! load. A field map can rename foreign keys onto this schema at load time.

pub mod dedup;
pub mod split;
pub mod zscore;

pub use dedup::{dedup_samples, dedup_texts, DedupOutcome, DuplicatePair};
pub use split::{stratified_split, SplitIndices, SplitSpec};
pub use zscore::{destandardize, standardize, zscore_stats, ParamStats, ZScoreStats, ZScores};

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::timescale::LogBase;

/// The eight annotation axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Main,
    Intention,
    Opinion,
    Hypothetical,
    Negation,
    Generic,
    Static,
    Recurrent,
}

impl Axis {
    pub const ALL: [Axis; 8] = [
        Axis::Main,
        Axis::Intention,
        Axis::Opinion,
        Axis::Hypothetical,
        Axis::Negation,
        Axis::Generic,
        Axis::Static,
        Axis::Recurrent,
    ];

    /// Lowercase key used in files.
    pub fn name(&self) -> &'static str {
        match self {
            Axis::Main => "main",
            Axis::Intention => "intention",
            Axis::Opinion => "opinion",
            Axis::Hypothetical => "hypothetical",
            Axis::Negation => "negation",
            Axis::Generic => "generic",
            Axis::Static => "static",
            Axis::Recurrent => "recurrent",
        }
    }

    /// Capitalized label for reports.
    pub fn label(&self) -> &'static str {
        match self {
            Axis::Main => "Main",
            Axis::Intention => "Intention",
            Axis::Opinion => "Opinion",
            Axis::Hypothetical => "Hypothetical",
            Axis::Negation => "Negation",
            Axis::Generic => "Generic",
            Axis::Static => "Static",
            Axis::Recurrent => "Recurrent",
        }
    }
}

impl std::fmt::Display for Axis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        Axis::ALL
            .into_iter()
            .find(|a| a.name() == lower)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown axis {s:?}")))
    }
}

/// Text spans per axis. Empty means the axis is not annotated on a sample.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisSpans {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub main: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub intention: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub opinion: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub hypothetical: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub negation: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub generic: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub r#static: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub recurrent: Vec<String>,
}

impl AxisSpans {
    pub fn get(&self, axis: Axis) -> &[String] {
        match axis {
            Axis::Main => &self.main,
            Axis::Intention => &self.intention,
            Axis::Opinion => &self.opinion,
            Axis::Hypothetical => &self.hypothetical,
            Axis::Negation => &self.negation,
            Axis::Generic => &self.generic,
            Axis::Static => &self.r#static,
            Axis::Recurrent => &self.recurrent,
        }
    }

    /// Axes that carry at least one span, in [`Axis::ALL`] order.
    pub fn present(&self) -> impl Iterator<Item = Axis> + '_ {
        Axis::ALL.into_iter().filter(|&a| !self.get(a).is_empty())
    }
}

/// Skew-normal target parameters on the logarithmic time axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetParams {
    pub location: f64,
    pub scale: f64,
    pub skewness: f64,
}

/// One annotated sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub id: String,
    pub parent_text: String,
    pub axes: AxisSpans,
    pub target: TargetParams,
    #[serde(default)]
    pub log_base: LogBase,
}

impl Sample {
    /// Schema rules that well-formed JSON can still break.
    pub fn validate(&self) -> std::result::Result<(), String> {
        if self.id.is_empty() {
            return Err("id must be nonempty".into());
        }
        if self.axes.main.is_empty() {
            return Err("axes.main must contain at least one span".into());
        }
        let t = &self.target;
        if !t.location.is_finite() || !t.scale.is_finite() || !t.skewness.is_finite() {
            return Err(format!(
                "target parameters must be finite, got ({}, {}, {})",
                t.location, t.scale, t.skewness
            ));
        }
        if t.scale <= 0.0 {
            return Err(format!("target.scale must be positive, got {}", t.scale));
        }
        Ok(())
    }
}

/// Canonical path -> actual key renames applied to raw JSON before parsing.
///
/// Top-level paths (`"parent_text"`) rename top-level keys; dotted paths
/// (`"target.location"`, `"axes.static"`) rename keys inside the named
/// object.
pub type FieldMap = BTreeMap<String, String>;

/// Samples plus non-fatal findings from a load.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadReport {
    pub samples: Vec<Sample>,
    pub warnings: Vec<String>,
}

const TOP_LEVEL_KEYS: [&str; 5] = ["id", "parent_text", "axes", "target", "log_base"];
const TARGET_KEYS: [&str; 3] = ["location", "scale", "skewness"];

fn validate_field_map(map: &FieldMap) -> Result<()> {
    for canonical in map.keys() {
        let ok = match canonical.split_once('.') {
            None => TOP_LEVEL_KEYS.contains(&canonical.as_str()),
            Some(("target", tail)) => TARGET_KEYS.contains(&tail),
            Some(("axes", tail)) => Axis::ALL.iter().any(|a| a.name() == tail),
            Some(_) => false,
        };
        if !ok {
            return Err(Error::InvalidArgument(format!(
                "field map refers to unknown canonical path {canonical:?}"
            )));
        }
    }
    Ok(())
}

fn apply_field_map(obj: &mut Map<String, Value>, map: &FieldMap) {
    for (canonical, actual) in map {
        match canonical.split_once('.') {
            None => {
                if actual != canonical {
                    if let Some(v) = obj.remove(actual) {
                        obj.insert(canonical.clone(), v);
                    }
                }
            }
            Some((head, tail)) => {
                if let Some(Value::Object(inner)) = obj.get_mut(head) {
                    if actual != tail {
                        if let Some(v) = inner.remove(actual) {
                            inner.insert(tail.to_string(), v);
                        }
                    }
                }
            }
        }
    }
}

/// Loads JSON Lines samples from a reader.
///
/// Blank lines are skipped. Malformed lines, unknown axis keys, and schema
/// violations abort with a data error carrying the 1-based line number;
/// unknown top-level keys are collected as warnings instead.
pub fn load_jsonl<R: BufRead>(reader: R, field_map: Option<&FieldMap>) -> Result<LoadReport> {
    if let Some(map) = field_map {
        validate_field_map(map)?;
    }
    let mut samples = Vec::new();
    let mut warnings = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let value: Value = serde_json::from_str(&line).map_err(|e| Error::Data {
            line: line_no,
            message: format!("invalid JSON: {e}"),
        })?;
        let Value::Object(mut obj) = value else {
            return Err(Error::Data {
                line: line_no,
                message: "expected a JSON object".into(),
            });
        };
        if let Some(map) = field_map {
            apply_field_map(&mut obj, map);
        }
        for key in obj.keys() {
            if !TOP_LEVEL_KEYS.contains(&key.as_str()) {
                warnings.push(format!("line {line_no}: ignoring unknown field `{key}`"));
            }
        }
        let sample: Sample =
            serde_json::from_value(Value::Object(obj)).map_err(|e| Error::Data {
                line: line_no,
                message: e.to_string(),
            })?;
        sample.validate().map_err(|message| Error::Data {
            line: line_no,
            message,
        })?;
        samples.push(sample);
    }
    Ok(LoadReport { samples, warnings })
}

/// [`load_jsonl`] for a file path.
pub fn load_jsonl_path<P: AsRef<Path>>(
    path: P,
    field_map: Option<&FieldMap>,
) -> Result<LoadReport> {
    let file = File::open(path.as_ref())
        .map_err(|e| Error::Io(format!("cannot open {}: {e}", path.as_ref().display())))?;
    load_jsonl(BufReader::new(file), field_map)
}

/// Writes samples as compact JSON Lines.
pub fn save_jsonl<W: Write>(mut writer: W, samples: &[Sample]) -> Result<()> {
    for sample in samples {
        let line = serde_json::to_string(sample)
            .map_err(|e| Error::Io(format!("serialization failed: {e}")))?;
        writer.write_all(line.as_bytes())?;
        writer.write_all(b"\n")?;
    }
    Ok(())
}

/// [`save_jsonl`] for a file path.
pub fn save_jsonl_path<P: AsRef<Path>>(path: P, samples: &[Sample]) -> Result<()> {
    let file = File::create(path.as_ref())
        .map_err(|e| Error::Io(format!("cannot create {}: {e}", path.as_ref().display())))?;
    save_jsonl(BufWriter::new(file), samples)
}

/// Number of samples carrying at least one span per axis, in
/// [`Axis::ALL`] order.
pub fn axis_counts(samples: &[Sample]) -> Vec<(Axis, usize)> {
    Axis::ALL
        .into_iter()
        .map(|axis| {
            let count = samples
                .iter()
                .filter(|s| !s.axes.get(axis).is_empty())
                .count();
            (axis, count)
        })
        .collect()
}
