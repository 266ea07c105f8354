//! Command-line front end.
//!
//! One subcommand per workflow: `fit` curves to annotation points,
//! `scenarios` for the bundled reference comparison, `convert` between log
//! bases, `validity`/`emit` to query and sample fitted curves, `eval` for
//! prediction scoring, `agreement` for annotator statistics, and
//! `dedup`/`stats` for dataset upkeep.
//!
//! Every command is deterministic: the same invocation on the same files
//! produces byte-identical output. Exit codes: 0 success, 1 usage error,
//! 2 data or computation error.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::json;

use crate::dataset::{
    self, axis_counts, dedup_samples, load_jsonl_path, zscore_stats, FieldMap, Sample,
};
use crate::distributions::Family;
use crate::error::{Error, Result};
use crate::fitting::scenarios::{FAMILY_ORDER, REFERENCE_RMSE, SCENARIO_LABELS, SCENARIO_TITLES};
use crate::fitting::{
    auc_normalize, fit, proportional_rescale_over, run_scenarios, AnnotationPoint, FitOptions,
    FitResult, ValidityCurve, WorkingDomain, DEFAULT_GRID_N,
};
use crate::metrics::{
    cohen_kappa, icc, jaccard, merge_labels, micro_precision, pk, regression_report, IccVariant,
    RegressionReport,
};
use crate::timescale::{
    compression_row, convert_log_value, convert_params, from_log, to_log, LogBase, LogTime,
    DEFAULT_LOG_BASE,
};
use crate::validity::{
    interval_probability_with, peak_minutes_with, sample_curve, validity_at, IntervalQuery,
};

/// Parses `argv`, runs the command, and returns the process exit code.
///
/// Helps and version requests exit 0; argument errors exit 1; everything
/// that fails after parsing (missing files, bad data, degenerate math)
/// exits 2.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(output) => {
            print!("{output}");
            0
        }
        Err(err) => {
            eprintln!("error: {err}");
            2
        }
    }
}

#[derive(Parser)]
#[command(
    name = "chronofit",
    version,
    about = "Temporal validity curves on a logarithmic time axis"
)]
struct Cli {
    /// TOML configuration file; explicit flags override its values.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Output format.
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,
    /// Seed for seeded operations (reserved; commands here are seed-free).
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Fit a curve family to annotation points from a CSV file.
    Fit(FitArgs),
    /// Refit the six bundled scenarios and compare with reference RMSE.
    Scenarios,
    /// Convert log-axis values or parameters between bases, or show the
    /// compression row for a timestamp.
    Convert(ConvertArgs),
    /// Query a fitted curve: point value, interval probability, or peak.
    Validity(ValidityArgs),
    /// Sample a curve as t_minutes,t_log,value rows.
    Emit(EmitArgs),
    /// Score predicted targets against gold targets, per parameter.
    Eval(EvalArgs),
    /// Annotator agreement: ICC, Jaccard, Pk, or Cohen's kappa.
    Agreement(AgreementArgs),
    /// Drop near-duplicate samples by TF-IDF cosine similarity.
    Dedup(DedupArgs),
    /// Summarize a dataset: axes, target statistics, token counts.
    Stats(StatsArgs),
}

#[derive(Args)]
struct FitArgs {
    /// CSV of points with header `t_minutes,value` or `t_log,value`
    /// (headerless files are read as minutes).
    points: PathBuf,
    /// Curve family: gaussian, exponential, log-normal, gamma, skew-normal.
    #[arg(long)]
    family: Family,
    /// Normalization of the curve written with --out.
    #[arg(long, value_enum, default_value_t = NormalizationArg::AucOne)]
    normalization: NormalizationArg,
    /// Write the fitted curve as JSON to this file.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Log base of the time axis.
    #[arg(long)]
    base: Option<f64>,
    /// Working-domain lower endpoint, in log units of the fit base.
    #[arg(long, value_name = "T_LOG", allow_hyphen_values = true)]
    domain_min: Option<f64>,
    /// Working-domain upper endpoint, in log units of the fit base.
    #[arg(long, value_name = "T_LOG", allow_hyphen_values = true)]
    domain_max: Option<f64>,
    /// Grid size for integrals and maximum scans.
    #[arg(long)]
    grid_n: Option<usize>,
    /// Residual-evaluation budget for the solver.
    #[arg(long)]
    max_evals: Option<usize>,
    /// Comma-separated skewness starts for the multistart search.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    multistart_alphas: Option<Vec<f64>>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum NormalizationArg {
    Raw,
    AucOne,
    Proportional,
}

#[derive(Args)]
#[command(group = ArgGroup::new("what").required(true).args(["value", "params", "minutes"]))]
struct ConvertArgs {
    /// A log-axis position to re-express in another base.
    #[arg(long, allow_hyphen_values = true, requires = "to_base")]
    value: Option<f64>,
    /// Curve parameters to re-express, as "location,scale,skewness".
    #[arg(
        long,
        value_name = "XI,OMEGA,ALPHA",
        allow_hyphen_values = true,
        requires = "to_base"
    )]
    params: Option<String>,
    /// A timestamp in minutes: print t', the compression ratio, and the
    /// compression percentage at --base.
    #[arg(long, conflicts_with_all = ["from_base", "to_base"])]
    minutes: Option<f64>,
    /// Source base (defaults to the configured base).
    #[arg(long)]
    from_base: Option<f64>,
    /// Destination base.
    #[arg(long)]
    to_base: Option<f64>,
    /// Base for --minutes (defaults to the configured base).
    #[arg(long)]
    base: Option<f64>,
}

#[derive(Args)]
#[command(group = ArgGroup::new("query").required(true).args(["at", "interval", "peak"]))]
struct ValidityArgs {
    /// Curve JSON produced by `fit --out`.
    curve: PathBuf,
    /// Curve value at this time in minutes.
    #[arg(long)]
    at: Option<f64>,
    /// Probability mass over [START, END] minutes (auc_one curves only).
    #[arg(long, num_args = 2, value_names = ["START_MIN", "END_MIN"])]
    interval: Option<Vec<f64>>,
    /// Time at which the curve peaks.
    #[arg(long)]
    peak: bool,
    /// Working-domain lower endpoint, in log units of the curve's base.
    #[arg(long, value_name = "T_LOG", allow_hyphen_values = true)]
    domain_min: Option<f64>,
    /// Working-domain upper endpoint, in log units of the curve's base.
    #[arg(long, value_name = "T_LOG", allow_hyphen_values = true)]
    domain_max: Option<f64>,
    /// Grid size for the interval integral and peak scan.
    #[arg(long)]
    grid_n: Option<usize>,
}

#[derive(Args)]
struct EmitArgs {
    /// Curve JSON produced by `fit --out`.
    curve: PathBuf,
    /// Number of rows to emit.
    #[arg(long, default_value_t = 100)]
    n: usize,
    /// Time range in minutes (defaults to the working domain).
    #[arg(long, num_args = 2, value_names = ["START_MIN", "END_MIN"])]
    domain: Option<Vec<f64>>,
    /// Write rows here instead of stdout.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    /// Predictions, as sample records whose targets are the predictions.
    preds: PathBuf,
    /// Gold samples.
    gold: PathBuf,
    /// TOML file mapping canonical field paths to the files' actual keys.
    #[arg(long, value_name = "FILE")]
    field_map: Option<PathBuf>,
}

#[derive(Args)]
#[command(group = ArgGroup::new("mode").required(true).args(["icc", "jaccard", "pk", "kappa"]))]
struct AgreementArgs {
    /// Ratings CSV (headerless; rows = subjects, columns = raters).
    #[arg(long, value_name = "FILE")]
    icc: Option<PathBuf>,
    /// ICC model: 2 = ICC(2,1) absolute agreement, 3 = ICC(3,1) consistency.
    #[arg(long, value_enum, default_value_t = IccModel::Two)]
    icc_model: IccModel,
    /// Two label files, one label per line.
    #[arg(long, num_args = 2, value_names = ["FILE_A", "FILE_B"])]
    jaccard: Option<Vec<PathBuf>>,
    /// Two segmentation JSON files: {"length": L, "boundaries": [..]}.
    #[arg(long, num_args = 2, value_names = ["REF", "HYP"])]
    pk: Option<Vec<PathBuf>>,
    /// Window size for --pk (default: half the mean reference segment).
    #[arg(long)]
    window: Option<usize>,
    /// Labeled confusion matrix CSV (header row and first column carry
    /// the same labels in the same order).
    #[arg(long, value_name = "FILE")]
    kappa: Option<PathBuf>,
    /// Labels to merge before --kappa, joined by '+' (repeatable).
    #[arg(long, value_name = "A+B")]
    merge: Vec<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum IccModel {
    #[value(name = "2")]
    Two,
    #[value(name = "3")]
    Three,
}

#[derive(Args)]
struct DedupArgs {
    /// Samples to deduplicate (JSON Lines).
    file: PathBuf,
    /// Cosine similarity above which the later sample is dropped.
    #[arg(long, default_value_t = 0.7)]
    threshold: f64,
    /// Write the kept samples here (JSON Lines).
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// TOML file mapping canonical field paths to the file's actual keys.
    #[arg(long, value_name = "FILE")]
    field_map: Option<PathBuf>,
}

#[derive(Args)]
struct StatsArgs {
    /// Samples to summarize (JSON Lines).
    file: PathBuf,
    /// TOML file mapping canonical field paths to the file's actual keys.
    #[arg(long, value_name = "FILE")]
    field_map: Option<PathBuf>,
}

/// Settings after merging defaults, the config file, and global flags.
struct CliConfig {
    base: LogBase,
    domain: WorkingDomain,
    grid_n: usize,
    multistart_alphas: Vec<f64>,
    format: OutputFormat,
    /// Accepted for config-file completeness; no current command draws
    /// random numbers.
    #[allow(dead_code)]
    seed: u64,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    default_base: Option<f64>,
    domain_min: Option<f64>,
    domain_max: Option<f64>,
    grid_n: Option<usize>,
    multistart_alphas: Option<Vec<f64>>,
    format: Option<String>,
    seed: Option<u64>,
}

fn resolve_config(cli: &Cli) -> Result<CliConfig> {
    let file = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::Io(format!("cannot read config {}: {e}", path.display())))?;
            toml::from_str::<FileConfig>(&text)
                .map_err(|e| Error::InvalidArgument(format!("config {}: {e}", path.display())))?
        }
        None => FileConfig::default(),
    };
    let base = LogBase::new(file.default_base.unwrap_or(DEFAULT_LOG_BASE))?;
    let defaults = WorkingDomain::default().endpoints_in(base);
    let domain = WorkingDomain::new(
        file.domain_min.unwrap_or(defaults.0),
        file.domain_max.unwrap_or(defaults.1),
        base,
    )?;
    let grid_n = file.grid_n.unwrap_or(DEFAULT_GRID_N);
    if grid_n < 2 {
        return Err(Error::InvalidArgument(format!(
            "config: grid_n must be at least 2, got {grid_n}"
        )));
    }
    let format = match cli.format {
        Some(f) => f,
        None => match file.format.as_deref() {
            None | Some("text") => OutputFormat::Text,
            Some("json") => OutputFormat::Json,
            Some("csv") => OutputFormat::Csv,
            Some(other) => {
                return Err(Error::InvalidArgument(format!(
                    "config: unknown format {other:?} (expected text, json, or csv)"
                )))
            }
        },
    };
    Ok(CliConfig {
        base,
        domain,
        grid_n,
        multistart_alphas: file
            .multistart_alphas
            .unwrap_or_else(|| vec![-3.0, 0.0, 3.0]),
        format,
        seed: cli.seed.or(file.seed).unwrap_or(0),
    })
}

fn execute(cli: Cli) -> Result<String> {
    let cfg = resolve_config(&cli)?;
    match &cli.command {
        Command::Fit(args) => cmd_fit(&cfg, args),
        Command::Scenarios => cmd_scenarios(&cfg),
        Command::Convert(args) => cmd_convert(&cfg, args),
        Command::Validity(args) => cmd_validity(&cfg, args),
        Command::Emit(args) => cmd_emit(&cfg, args),
        Command::Eval(args) => cmd_eval(&cfg, args),
        Command::Agreement(args) => cmd_agreement(&cfg, args),
        Command::Dedup(args) => cmd_dedup(&cfg, args),
        Command::Stats(args) => cmd_stats(&cfg, args),
    }
}

// ---------------------------------------------------------------- helpers

/// Log-axis positions print with two decimals, like the reference tables.
fn fmt_log(v: f64) -> String {
    format!("{v:.2}")
}

/// Compression ratios print with three significant digits.
fn fmt_ratio(v: f64) -> String {
    if v >= 1e-3 {
        format!("{v:.3}")
    } else {
        format!("{v:.3e}")
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    match v {
        Some(v) => format!("{v:.4}"),
        None => "n/a".to_string(),
    }
}

fn csv_string<F>(write: F) -> Result<String>
where
    F: FnOnce(&mut csv::Writer<Vec<u8>>) -> std::result::Result<(), csv::Error>,
{
    let mut writer = csv::Writer::from_writer(Vec::new());
    write(&mut writer).map_err(|e| Error::Io(format!("csv output failed: {e}")))?;
    let bytes = writer
        .into_inner()
        .map_err(|e| Error::Io(format!("csv output failed: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(format!("csv output failed: {e}")))
}

fn json_string(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("json serialization");
    s.push('\n');
    s
}

fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("cannot read {}: {e}", path.display())))
}

fn load_curve(path: &Path) -> Result<ValidityCurve> {
    ValidityCurve::from_json(&read_to_string(path)?)
}

fn load_field_map(path: Option<&PathBuf>) -> Result<Option<FieldMap>> {
    match path {
        None => Ok(None),
        Some(p) => {
            let text = read_to_string(p)?;
            let map: FieldMap = toml::from_str(&text)
                .map_err(|e| Error::InvalidArgument(format!("field map {}: {e}", p.display())))?;
            Ok(Some(map))
        }
    }
}

fn load_samples(path: &Path, field_map: Option<&FieldMap>) -> Result<Vec<Sample>> {
    let report = load_jsonl_path(path, field_map)?;
    for warning in &report.warnings {
        eprintln!("warning: {}: {warning}", path.display());
    }
    Ok(report.samples)
}

fn resolve_domain(
    cfg: &CliConfig,
    min_flag: Option<f64>,
    max_flag: Option<f64>,
    base: LogBase,
) -> Result<WorkingDomain> {
    let (dmin, dmax) = cfg.domain.endpoints_in(base);
    WorkingDomain::new(min_flag.unwrap_or(dmin), max_flag.unwrap_or(dmax), base)
}

// -------------------------------------------------------------------- fit

fn read_points(path: &Path, base: LogBase) -> Result<Vec<AnnotationPoint>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Error::Io(format!("cannot read {}: {e}", path.display())))?;
    let mut points = Vec::new();
    let mut minutes_mode = true;
    for (idx, record) in reader.records().enumerate() {
        let line = idx + 1;
        let record = record.map_err(|e| Error::Data {
            line,
            message: e.to_string(),
        })?;
        if record.len() != 2 {
            return Err(Error::Data {
                line,
                message: format!("expected 2 columns, got {}", record.len()),
            });
        }
        let parsed = (record[0].parse::<f64>(), record[1].parse::<f64>());
        if idx == 0 {
            if let (Err(_), _) | (_, Err(_)) = parsed {
                minutes_mode = match &record[0] {
                    "t_minutes" => true,
                    "t_log" => false,
                    other => {
                        return Err(Error::Data {
                            line,
                            message: format!(
                                "unrecognized header {other:?} (expected t_minutes or t_log)"
                            ),
                        })
                    }
                };
                continue;
            }
        }
        let (t, y) = match parsed {
            (Ok(t), Ok(y)) => (t, y),
            _ => {
                return Err(Error::Data {
                    line,
                    message: format!("cannot parse point ({}, {})", &record[0], &record[1]),
                })
            }
        };
        let x = if minutes_mode {
            to_log(t, base)?.value
        } else {
            t
        };
        points.push(AnnotationPoint::new(x, y).map_err(|e| Error::Data {
            line,
            message: e.to_string(),
        })?);
    }
    Ok(points)
}

fn fit_rows(result: &FitResult, n_points: usize) -> Vec<(String, String)> {
    let mut rows = vec![
        ("family".to_string(), result.family.name().to_string()),
        ("points".to_string(), n_points.to_string()),
    ];
    for (name, value) in result.params.named_values() {
        rows.push((name.to_string(), format!("{value:.6}")));
    }
    rows.push(("amplitude_raw".to_string(), format!("{:.6}", result.s_fit)));
    rows.push(("auc".to_string(), format!("{:.6}", result.auc)));
    rows.push(("peak_density".to_string(), format!("{:.6}", result.f_max)));
    rows.push((
        "amplitude_proportional".to_string(),
        format!("{:.6}", result.s_final),
    ));
    rows.push(("rmse".to_string(), format!("{:.6}", result.rmse)));
    rows.push(("iterations".to_string(), result.iterations.to_string()));
    rows.push(("converged".to_string(), result.converged.to_string()));
    rows
}

fn cmd_fit(cfg: &CliConfig, args: &FitArgs) -> Result<String> {
    let base = match args.base {
        Some(b) => LogBase::new(b)?,
        None => cfg.base,
    };
    let domain = resolve_domain(cfg, args.domain_min, args.domain_max, base)?;
    let options = FitOptions {
        base,
        domain,
        grid_n: args.grid_n.unwrap_or(cfg.grid_n),
        multistart_alphas: args
            .multistart_alphas
            .clone()
            .unwrap_or_else(|| cfg.multistart_alphas.clone()),
        max_nfev: args.max_evals.unwrap_or(FitOptions::default().max_nfev),
        ..FitOptions::default()
    };
    let points = read_points(&args.points, base)?;
    let result = fit(&points, args.family, &options)?;

    let raw = result.raw_curve(base);
    let span = domain.endpoints_in(base);
    let curve = match args.normalization {
        NormalizationArg::Raw => raw,
        NormalizationArg::AucOne => auc_normalize(&raw, span, options.grid_n)?,
        NormalizationArg::Proportional => {
            let auc = auc_normalize(&raw, span, options.grid_n)?;
            proportional_rescale_over(&auc, span, options.grid_n)?
        }
    };
    let mut wrote = None;
    if let Some(out) = &args.out {
        fs::write(out, curve.to_json() + "\n")
            .map_err(|e| Error::Io(format!("cannot write {}: {e}", out.display())))?;
        wrote = Some(format!(
            "wrote {} curve to {}",
            curve.normalization,
            out.display()
        ));
    }

    match cfg.format {
        OutputFormat::Text => {
            let mut out = String::new();
            for (key, value) in fit_rows(&result, points.len()) {
                out.push_str(&format!("{key:<22} = {value}\n"));
            }
            if let Some(line) = wrote {
                out.push_str(&line);
                out.push('\n');
            }
            Ok(out)
        }
        OutputFormat::Json => {
            let mut value = serde_json::to_value(&result).expect("fit result to json");
            value["points"] = json!(points.len());
            value["curve"] = serde_json::from_str(&curve.to_json()).expect("curve json");
            Ok(json_string(&value))
        }
        OutputFormat::Csv => csv_string(|w| {
            w.write_record(["key", "value"])?;
            for (key, value) in fit_rows(&result, points.len()) {
                w.write_record([key.as_str(), value.as_str()])?;
            }
            Ok(())
        }),
    }
}

// -------------------------------------------------------------- scenarios

fn cmd_scenarios(cfg: &CliConfig) -> Result<String> {
    let table = run_scenarios()?;
    match cfg.format {
        OutputFormat::Text => {
            let mut out = format!("{:<10}", "scenario");
            for family in FAMILY_ORDER {
                out.push_str(&format!("{:>18}", family.name()));
            }
            out.push('\n');
            for (i, label) in SCENARIO_LABELS.iter().enumerate() {
                let best = table.best_family(i);
                let mut row = format!("{label:<10}");
                for (j, family) in FAMILY_ORDER.into_iter().enumerate() {
                    let mark = if family == best { "*" } else { " " };
                    let cell =
                        format!("{:.4}{mark}({:.4})", table.rmse[i][j], REFERENCE_RMSE[i][j]);
                    row.push_str(&format!("{cell:>18}"));
                }
                out.push_str(&row);
                out.push('\n');
            }
            out.push_str("* lowest rmse in the scenario; reference values in parentheses\n");
            Ok(out)
        }
        OutputFormat::Json => {
            let scenarios: Vec<serde_json::Value> = (0..SCENARIO_LABELS.len())
                .map(|i| {
                    let mut rmse = serde_json::Map::new();
                    let mut reference = serde_json::Map::new();
                    for (j, family) in FAMILY_ORDER.into_iter().enumerate() {
                        rmse.insert(family.name().to_string(), json!(table.rmse[i][j]));
                        reference.insert(family.name().to_string(), json!(REFERENCE_RMSE[i][j]));
                    }
                    json!({
                        "label": SCENARIO_LABELS[i],
                        "title": SCENARIO_TITLES[i],
                        "best_family": table.best_family(i).name(),
                        "rmse": rmse,
                        "reference": reference,
                    })
                })
                .collect();
            Ok(json_string(&json!({ "scenarios": scenarios })))
        }
        OutputFormat::Csv => csv_string(|w| {
            w.write_record(["scenario", "family", "rmse", "reference", "best"])?;
            for (i, label) in SCENARIO_LABELS.iter().enumerate() {
                let best = table.best_family(i);
                for (j, family) in FAMILY_ORDER.into_iter().enumerate() {
                    w.write_record([
                        label.to_string(),
                        family.name().to_string(),
                        format!("{:.6}", table.rmse[i][j]),
                        format!("{:.4}", REFERENCE_RMSE[i][j]),
                        (family == best).to_string(),
                    ])?;
                }
            }
            Ok(())
        }),
    }
}

// ---------------------------------------------------------------- convert

fn parse_param_triple(text: &str) -> Result<crate::distributions::SkewNormalParams> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(Error::InvalidArgument(format!(
            "--params expects \"location,scale,skewness\", got {text:?}"
        )));
    }
    let mut values = [0.0f64; 3];
    for (slot, part) in values.iter_mut().zip(&parts) {
        *slot = part
            .parse::<f64>()
            .map_err(|_| Error::InvalidArgument(format!("cannot parse parameter {part:?}")))?;
    }
    crate::distributions::SkewNormalParams::new(values[0], values[1], values[2])
}

fn cmd_convert(cfg: &CliConfig, args: &ConvertArgs) -> Result<String> {
    if let Some(minutes) = args.minutes {
        let base = match args.base {
            Some(b) => LogBase::new(b)?,
            None => cfg.base,
        };
        let row = compression_row(minutes, base)?;
        return Ok(match cfg.format {
            OutputFormat::Text => format!(
                "t = {} min, base {}: t' = {}, cr = {}, compression = {:.1}%\n",
                row.minutes,
                base,
                fmt_log(row.log_value),
                fmt_ratio(row.compression_ratio),
                row.percent
            ),
            OutputFormat::Json => json_string(&json!({
                "minutes": row.minutes,
                "base": base.value(),
                "log_value": row.log_value,
                "compression_ratio": row.compression_ratio,
                "percent": row.percent,
            })),
            OutputFormat::Csv => csv_string(|w| {
                w.write_record(["minutes", "base", "t_log", "compression_ratio", "percent"])?;
                w.write_record([
                    row.minutes.to_string(),
                    base.value().to_string(),
                    fmt_log(row.log_value),
                    fmt_ratio(row.compression_ratio),
                    format!("{:.1}", row.percent),
                ])?;
                Ok(())
            })?,
        });
    }

    let from = match args.from_base {
        Some(b) => LogBase::new(b)?,
        None => cfg.base,
    };
    let to = LogBase::new(args.to_base.expect("clap enforces --to-base"))?;

    if let Some(value) = args.value {
        let converted = convert_log_value(LogTime { value, base: from }, to);
        return Ok(match cfg.format {
            OutputFormat::Text => format!(
                "{} (base {from}) = {} (base {to})\n",
                fmt_log(value),
                fmt_log(converted.value)
            ),
            OutputFormat::Json => json_string(&json!({
                "from_base": from.value(),
                "to_base": to.value(),
                "input": value,
                "value": converted.value,
            })),
            OutputFormat::Csv => csv_string(|w| {
                w.write_record(["from_base", "to_base", "input", "value"])?;
                w.write_record([
                    from.value().to_string(),
                    to.value().to_string(),
                    value.to_string(),
                    converted.value.to_string(),
                ])?;
                Ok(())
            })?,
        });
    }

    let params = parse_param_triple(args.params.as_deref().expect("clap enforces the group"))?;
    let converted = convert_params(params, from, to);
    Ok(match cfg.format {
        OutputFormat::Text => {
            let mut out = format!("base {from} -> base {to}\n");
            out.push_str(&format!(
                "location  {:.6} -> {:.6}\n",
                params.xi, converted.xi
            ));
            out.push_str(&format!(
                "scale     {:.6} -> {:.6}\n",
                params.omega, converted.omega
            ));
            out.push_str(&format!(
                "skewness  {:.6} -> {:.6}\n",
                params.alpha, converted.alpha
            ));
            out
        }
        OutputFormat::Json => json_string(&json!({
            "from_base": from.value(),
            "to_base": to.value(),
            "location": converted.xi,
            "scale": converted.omega,
            "skewness": converted.alpha,
        })),
        OutputFormat::Csv => csv_string(|w| {
            w.write_record(["parameter", "input", "converted"])?;
            for (name, a, b) in [
                ("location", params.xi, converted.xi),
                ("scale", params.omega, converted.omega),
                ("skewness", params.alpha, converted.alpha),
            ] {
                w.write_record([name, &a.to_string(), &b.to_string()])?;
            }
            Ok(())
        })?,
    })
}

// --------------------------------------------------------------- validity

fn cmd_validity(cfg: &CliConfig, args: &ValidityArgs) -> Result<String> {
    let curve = load_curve(&args.curve)?;
    let domain = resolve_domain(cfg, args.domain_min, args.domain_max, curve.base)?;
    let grid_n = args.grid_n.unwrap_or(cfg.grid_n);

    if let Some(t) = args.at {
        let value = validity_at(&curve, t)?;
        let position = to_log(t, curve.base)?;
        return Ok(match cfg.format {
            OutputFormat::Text => format!(
                "validity at {t} min (t' = {}): {value:.6}\n",
                fmt_log(position.value)
            ),
            OutputFormat::Json => json_string(&json!({
                "query": "at",
                "t_minutes": t,
                "t_log": position.value,
                "value": value,
            })),
            OutputFormat::Csv => csv_string(|w| {
                w.write_record(["query", "t_minutes", "value"])?;
                w.write_record(["at", &t.to_string(), &value.to_string()])?;
                Ok(())
            })?,
        });
    }

    if let Some(bounds) = &args.interval {
        let query = IntervalQuery::new(bounds[0], bounds[1])?;
        let mass = interval_probability_with(&curve, query, &domain, grid_n)?;
        return Ok(match cfg.format {
            OutputFormat::Text => format!(
                "P[{} min, {} min] = {mass:.6}\n",
                query.start_minutes(),
                query.end_minutes()
            ),
            OutputFormat::Json => json_string(&json!({
                "query": "interval",
                "start_minutes": query.start_minutes(),
                "end_minutes": query.end_minutes(),
                "probability": mass,
            })),
            OutputFormat::Csv => csv_string(|w| {
                w.write_record(["query", "start_minutes", "end_minutes", "probability"])?;
                w.write_record([
                    "interval".to_string(),
                    query.start_minutes().to_string(),
                    query.end_minutes().to_string(),
                    mass.to_string(),
                ])?;
                Ok(())
            })?,
        });
    }

    let t = peak_minutes_with(&curve, &domain, grid_n)?;
    let position = to_log(t, curve.base)?;
    Ok(match cfg.format {
        OutputFormat::Text => format!("peak at {t:.2} min (t' = {})\n", fmt_log(position.value)),
        OutputFormat::Json => json_string(&json!({
            "query": "peak",
            "t_minutes": t,
            "t_log": position.value,
        })),
        OutputFormat::Csv => csv_string(|w| {
            w.write_record(["query", "t_minutes", "t_log"])?;
            w.write_record(["peak", &t.to_string(), &position.value.to_string()])?;
            Ok(())
        })?,
    })
}

// ------------------------------------------------------------------- emit

fn cmd_emit(cfg: &CliConfig, args: &EmitArgs) -> Result<String> {
    let curve = load_curve(&args.curve)?;
    let range = match &args.domain {
        Some(bounds) => (bounds[0], bounds[1]),
        None => {
            let (lo, hi) = WorkingDomain::default().endpoints_in(curve.base);
            (
                from_log(LogTime {
                    value: lo,
                    base: curve.base,
                })?,
                from_log(LogTime {
                    value: hi,
                    base: curve.base,
                })?,
            )
        }
    };
    let rows = sample_curve(&curve, args.n, range)?;

    let body = if cfg.format == OutputFormat::Json {
        json_string(&serde_json::to_value(&rows).expect("rows to json"))
    } else {
        csv_string(|w| {
            for row in &rows {
                w.serialize(row)?;
            }
            Ok(())
        })?
    };
    match &args.out {
        Some(path) => {
            fs::write(path, &body)
                .map_err(|e| Error::Io(format!("cannot write {}: {e}", path.display())))?;
            Ok(format!("wrote {} rows to {}\n", rows.len(), path.display()))
        }
        None => Ok(body),
    }
}

// ------------------------------------------------------------------- eval

fn paired_targets(
    preds: &[Sample],
    gold: &[Sample],
) -> Result<(Vec<usize>, Vec<usize>, Option<String>)> {
    let mut by_id = std::collections::BTreeMap::new();
    let mut unique = true;
    for (i, p) in preds.iter().enumerate() {
        unique &= by_id.insert(p.id.as_str(), i).is_none();
    }
    let gold_unique = {
        let ids: BTreeSet<&str> = gold.iter().map(|g| g.id.as_str()).collect();
        ids.len() == gold.len()
    };
    if unique
        && gold_unique
        && preds.len() == gold.len()
        && gold.iter().all(|g| by_id.contains_key(g.id.as_str()))
    {
        let pred_idx: Vec<usize> = gold.iter().map(|g| by_id[g.id.as_str()]).collect();
        let gold_idx: Vec<usize> = (0..gold.len()).collect();
        return Ok((pred_idx, gold_idx, None));
    }
    if preds.len() == gold.len() {
        let idx: Vec<usize> = (0..gold.len()).collect();
        return Ok((
            idx.clone(),
            idx,
            Some("ids do not align; pairing records by position".to_string()),
        ));
    }
    Err(Error::InvalidArgument(format!(
        "cannot pair files: {} predictions vs {} gold samples and ids do not match",
        preds.len(),
        gold.len()
    )))
}

fn cmd_eval(cfg: &CliConfig, args: &EvalArgs) -> Result<String> {
    let field_map = load_field_map(args.field_map.as_ref())?;
    let preds = load_samples(&args.preds, field_map.as_ref())?;
    let gold = load_samples(&args.gold, field_map.as_ref())?;
    let (pred_idx, gold_idx, warning) = paired_targets(&preds, &gold)?;
    if let Some(w) = &warning {
        eprintln!("warning: {w}");
    }

    let series = |f: fn(&crate::dataset::TargetParams) -> f64| -> (Vec<f64>, Vec<f64>) {
        (
            pred_idx.iter().map(|&i| f(&preds[i].target)).collect(),
            gold_idx.iter().map(|&i| f(&gold[i].target)).collect(),
        )
    };
    let mut reports = Vec::new();
    for f in [
        (|t: &crate::dataset::TargetParams| t.location) as fn(&crate::dataset::TargetParams) -> f64,
        |t| t.scale,
        |t| t.skewness,
    ] {
        let (p, g) = series(f);
        reports.push(regression_report(&p, &g)?);
    }
    let average = average_reports(&reports);
    let named: Vec<(&str, &RegressionReport)> = vec![
        ("location", &reports[0]),
        ("scale", &reports[1]),
        ("skewness", &reports[2]),
        ("average", &average),
    ];

    match cfg.format {
        OutputFormat::Text => {
            let mut out = format!(
                "{:<10}{:>6}{:>10}{:>10}{:>10}{:>10}{:>10}{:>10}\n",
                "parameter", "n", "mse", "mae", "r2", "spearman", "nll", "crps"
            );
            for (name, r) in &named {
                out.push_str(&format!(
                    "{:<10}{:>6}{:>10.4}{:>10.4}{:>10}{:>10}{:>10.4}{:>10.4}\n",
                    name,
                    r.n,
                    r.mse,
                    r.mae,
                    fmt_opt(r.r2),
                    fmt_opt(r.spearman),
                    r.nll,
                    r.crps
                ));
            }
            Ok(out)
        }
        OutputFormat::Json => {
            let mut map = serde_json::Map::new();
            for (name, r) in &named {
                map.insert(name.to_string(), serde_json::to_value(r).expect("report"));
            }
            Ok(json_string(&serde_json::Value::Object(map)))
        }
        OutputFormat::Csv => csv_string(|w| {
            w.write_record([
                "parameter",
                "n",
                "mse",
                "mae",
                "r2",
                "spearman",
                "nll",
                "crps",
            ])?;
            for (name, r) in &named {
                w.write_record([
                    name.to_string(),
                    r.n.to_string(),
                    r.mse.to_string(),
                    r.mae.to_string(),
                    r.r2.map(|v| v.to_string()).unwrap_or_default(),
                    r.spearman.map(|v| v.to_string()).unwrap_or_default(),
                    r.nll.to_string(),
                    r.crps.to_string(),
                ])?;
            }
            Ok(())
        }),
    }
}

fn average_reports(reports: &[RegressionReport]) -> RegressionReport {
    let k = reports.len() as f64;
    let avg = |f: fn(&RegressionReport) -> f64| reports.iter().map(f).sum::<f64>() / k;
    let opt = |f: fn(&RegressionReport) -> Option<f64>| -> Option<f64> {
        let defined: Vec<f64> = reports.iter().filter_map(f).collect();
        if defined.len() == reports.len() {
            Some(defined.iter().sum::<f64>() / k)
        } else {
            None
        }
    };
    RegressionReport {
        n: reports.first().map_or(0, |r| r.n),
        mse: avg(|r| r.mse),
        mae: avg(|r| r.mae),
        r2: opt(|r| r.r2),
        spearman: opt(|r| r.spearman),
        nll: avg(|r| r.nll),
        crps: avg(|r| r.crps),
    }
}

// -------------------------------------------------------------- agreement

fn read_matrix(path: &Path) -> Result<Vec<Vec<f64>>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Error::Io(format!("cannot read {}: {e}", path.display())))?;
    let mut rows = Vec::new();
    for (idx, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Data {
            line: idx + 1,
            message: e.to_string(),
        })?;
        let mut row = Vec::with_capacity(record.len());
        for field in record.iter() {
            row.push(field.parse::<f64>().map_err(|_| Error::Data {
                line: idx + 1,
                message: format!("cannot parse {field:?} as a number"),
            })?);
        }
        rows.push(row);
    }
    Ok(rows)
}

fn read_labeled_matrix(path: &Path) -> Result<(Vec<Vec<f64>>, Vec<String>)> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Error::Io(format!("cannot read {}: {e}", path.display())))?;
    let mut labels: Vec<String> = Vec::new();
    let mut rows = Vec::new();
    for (idx, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Data {
            line: idx + 1,
            message: e.to_string(),
        })?;
        if idx == 0 {
            // Header: the top-left cell is decorative.
            labels = record.iter().skip(1).map(str::to_string).collect();
            continue;
        }
        let row_label = record.get(0).unwrap_or_default();
        let expected = labels.get(idx - 1).map(String::as_str).unwrap_or_default();
        if row_label != expected {
            return Err(Error::Data {
                line: idx + 1,
                message: format!(
                    "row label {row_label:?} does not match header order (expected {expected:?})"
                ),
            });
        }
        let mut row = Vec::new();
        for field in record.iter().skip(1) {
            row.push(field.parse::<f64>().map_err(|_| Error::Data {
                line: idx + 1,
                message: format!("cannot parse {field:?} as a count"),
            })?);
        }
        rows.push(row);
    }
    Ok((rows, labels))
}

fn read_label_set(path: &Path) -> Result<BTreeSet<String>> {
    Ok(read_to_string(path)?
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(str::to_string)
        .collect())
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SegmentationFile {
    length: usize,
    boundaries: Vec<usize>,
}

fn read_segmentation(path: &Path) -> Result<SegmentationFile> {
    serde_json::from_str(&read_to_string(path)?).map_err(|e| Error::Data {
        line: 1,
        message: format!("{}: {e}", path.display()),
    })
}

fn agreement_output(cfg: &CliConfig, rows: &[(&str, String)]) -> Result<String> {
    match cfg.format {
        OutputFormat::Text => Ok(rows
            .iter()
            .map(|(k, v)| format!("{k} = {v}\n"))
            .collect::<String>()),
        OutputFormat::Json => {
            let mut map = serde_json::Map::new();
            for (k, v) in rows {
                let value = v
                    .parse::<f64>()
                    .map(|n| json!(n))
                    .unwrap_or_else(|_| json!(v));
                map.insert(k.to_string(), value);
            }
            Ok(json_string(&serde_json::Value::Object(map)))
        }
        OutputFormat::Csv => csv_string(|w| {
            w.write_record(["key", "value"])?;
            for (k, v) in rows {
                w.write_record([*k, v.as_str()])?;
            }
            Ok(())
        }),
    }
}

fn cmd_agreement(cfg: &CliConfig, args: &AgreementArgs) -> Result<String> {
    if let Some(path) = &args.icc {
        let matrix = read_matrix(path)?;
        let variant = match args.icc_model {
            IccModel::Two => IccVariant::TwoWayRandom,
            IccModel::Three => IccVariant::TwoWayMixed,
        };
        let value = icc(&matrix, variant)?;
        return agreement_output(
            cfg,
            &[
                ("metric", variant.to_string()),
                ("value", format!("{value:.6}")),
            ],
        );
    }

    if let Some(files) = &args.jaccard {
        let a = read_label_set(&files[0])?;
        let b = read_label_set(&files[1])?;
        let value = jaccard(&a, &b);
        return agreement_output(
            cfg,
            &[
                ("metric", "jaccard".to_string()),
                ("value", format!("{value:.6}")),
            ],
        );
    }

    if let Some(files) = &args.pk {
        let reference = read_segmentation(&files[0])?;
        let hypothesis = read_segmentation(&files[1])?;
        if reference.length != hypothesis.length {
            return Err(Error::InvalidArgument(format!(
                "segmentations cover different lengths: {} vs {}",
                reference.length, hypothesis.length
            )));
        }
        let result = pk(
            &reference.boundaries,
            &hypothesis.boundaries,
            reference.length,
            args.window,
        )?;
        return agreement_output(
            cfg,
            &[
                ("metric", "pk".to_string()),
                ("value", format!("{:.6}", result.value)),
                ("window", result.window.to_string()),
                ("length", reference.length.to_string()),
            ],
        );
    }

    let path = args.kappa.as_ref().expect("clap enforces the mode group");
    let (mut matrix, mut labels) = read_labeled_matrix(path)?;
    if !args.merge.is_empty() {
        let mut groups = Vec::new();
        for spec in &args.merge {
            let mut group = Vec::new();
            for name in spec.split('+').map(str::trim) {
                let idx = labels.iter().position(|l| l == name).ok_or_else(|| {
                    Error::InvalidArgument(format!("unknown label {name:?} in --merge"))
                })?;
                group.push(idx);
            }
            groups.push(group);
        }
        let (merged, names) = merge_labels(&matrix, &labels, &groups)?;
        matrix = merged;
        labels = names;
    }
    let kappa = cohen_kappa(&matrix)?;
    let precision = micro_precision(&matrix)?;
    agreement_output(
        cfg,
        &[
            ("metric", "kappa".to_string()),
            ("labels", labels.join(", ")),
            ("kappa", format!("{kappa:.6}")),
            ("micro_precision", format!("{precision:.6}")),
        ],
    )
}

// ------------------------------------------------------------------ dedup

fn cmd_dedup(cfg: &CliConfig, args: &DedupArgs) -> Result<String> {
    let field_map = load_field_map(args.field_map.as_ref())?;
    let samples = load_samples(&args.file, field_map.as_ref())?;
    let outcome = dedup_samples(&samples, args.threshold)?;

    let mut wrote = None;
    if let Some(path) = &args.out {
        let kept: Vec<Sample> = outcome.kept.iter().map(|&i| samples[i].clone()).collect();
        dataset::save_jsonl_path(path, &kept)?;
        wrote = Some(format!(
            "wrote {} samples to {}",
            kept.len(),
            path.display()
        ));
    }

    match cfg.format {
        OutputFormat::Text => {
            let mut out = format!(
                "kept {} of {} samples (threshold {:.2})\n",
                outcome.kept.len(),
                samples.len(),
                args.threshold
            );
            for pair in &outcome.removed {
                out.push_str(&format!(
                    "removed {} (duplicate of {}, cosine {:.4})\n",
                    samples[pair.removed].id, samples[pair.kept].id, pair.cosine
                ));
            }
            if let Some(line) = wrote {
                out.push_str(&line);
                out.push('\n');
            }
            Ok(out)
        }
        OutputFormat::Json => {
            let removed: Vec<serde_json::Value> = outcome
                .removed
                .iter()
                .map(|p| {
                    json!({
                        "id": samples[p.removed].id,
                        "duplicate_of": samples[p.kept].id,
                        "cosine": p.cosine,
                    })
                })
                .collect();
            let kept: Vec<&str> = outcome
                .kept
                .iter()
                .map(|&i| samples[i].id.as_str())
                .collect();
            Ok(json_string(&json!({
                "threshold": args.threshold,
                "total": samples.len(),
                "kept": kept,
                "removed": removed,
            })))
        }
        OutputFormat::Csv => csv_string(|w| {
            w.write_record(["removed_id", "kept_id", "cosine"])?;
            for pair in &outcome.removed {
                w.write_record([
                    samples[pair.removed].id.as_str(),
                    samples[pair.kept].id.as_str(),
                    &format!("{:.6}", pair.cosine),
                ])?;
            }
            Ok(())
        }),
    }
}

// ------------------------------------------------------------------ stats

fn cmd_stats(cfg: &CliConfig, args: &StatsArgs) -> Result<String> {
    let field_map = load_field_map(args.field_map.as_ref())?;
    let samples = load_samples(&args.file, field_map.as_ref())?;
    let n = samples.len();
    let counts = axis_counts(&samples);
    let stats = if n >= 2 {
        Some(zscore_stats(&samples)?)
    } else {
        None
    };
    let token_total: usize = samples
        .iter()
        .map(|s| s.parent_text.split_whitespace().count())
        .sum();
    let token_mean = if n > 0 {
        token_total as f64 / n as f64
    } else {
        0.0
    };
    let percent = |count: usize| {
        if n > 0 {
            100.0 * count as f64 / n as f64
        } else {
            0.0
        }
    };

    match cfg.format {
        OutputFormat::Text => {
            let mut out = format!("samples: {n}\naxes:\n");
            for &(axis, count) in &counts {
                out.push_str(&format!(
                    "  {:<13}{:>6}  ({:.1}%)\n",
                    axis.label(),
                    count,
                    percent(count)
                ));
            }
            match &stats {
                Some(s) => {
                    out.push_str("targets (mean, sd):\n");
                    for (name, p) in [
                        ("location", s.location),
                        ("scale", s.scale),
                        ("skewness", s.skewness),
                    ] {
                        out.push_str(&format!("  {:<10}{:>12.4}{:>12.4}\n", name, p.mean, p.sd));
                    }
                }
                None => out.push_str("targets: n/a (need at least 2 samples)\n"),
            }
            out.push_str(&format!(
                "tokens (whitespace): total {token_total}, mean {token_mean:.1}\n"
            ));
            Ok(out)
        }
        OutputFormat::Json => {
            let axes: Vec<serde_json::Value> = counts
                .iter()
                .map(|&(axis, count)| {
                    json!({
                        "axis": axis.name(),
                        "count": count,
                        "percent": percent(count),
                    })
                })
                .collect();
            Ok(json_string(&json!({
                "samples": n,
                "axes": axes,
                "targets": stats.map(|s| serde_json::to_value(s).expect("stats")),
                "tokens": { "total": token_total, "mean": token_mean },
            })))
        }
        OutputFormat::Csv => csv_string(|w| {
            w.write_record(["metric", "name", "value"])?;
            w.write_record(["samples", "", &n.to_string()])?;
            for &(axis, count) in &counts {
                w.write_record(["axis_count", axis.name(), &count.to_string()])?;
                w.write_record([
                    "axis_percent",
                    axis.name(),
                    &format!("{:.1}", percent(count)),
                ])?;
            }
            if let Some(s) = &stats {
                for (name, p) in [
                    ("location", s.location),
                    ("scale", s.scale),
                    ("skewness", s.skewness),
                ] {
                    w.write_record(["target_mean", name, &p.mean.to_string()])?;
                    w.write_record(["target_sd", name, &p.sd.to_string()])?;
                }
            }
            w.write_record(["token_total", "", &token_total.to_string()])?;
            w.write_record(["token_mean", "", &format!("{token_mean:.1}")])?;
            Ok(())
        }),
    }
}
