//! Temporal validity modeling on a logarithmic time axis.
//!
//! A statement's validity is modeled as a probability curve over log-compressed
//! elapsed time: the curve says how likely the statement is to still hold after
//! a minute, an hour, a week. This crate provides the whole pipeline around
//! that idea:
//!
//! - [`timescale`]: conversion between linear minutes and log-time of a
//!   configurable base, including curve-parameter conversion between bases.
//! - [`distributions`]: the five candidate density families (Gaussian,
//!   exponential, log-normal, gamma, skew-normal) with a high-precision
//!   error function and log-gamma.
//! - [`fitting`]: bounded nonlinear least squares over annotation points,
//!   AUC normalization, and proportional rescaling.
//! - [`validity`]: point, interval, and peak queries against a fitted curve.
//! - [`metrics`]: regression evaluation and annotator-agreement measures.
//! - [`dataset`]: JSONL sample I/O, z-scoring, stratified splitting, and
//!   near-duplicate detection.
//! - [`cli`]: the `chronofit` command-line front end over all of the above.
//!
//! Times are elapsed minutes since publication; anything below one minute is
//! outside the supported domain. The default log base is 1.1.

pub mod cli;
pub mod dataset;
pub mod distributions;
pub mod error;
pub mod fitting;
pub mod metrics;
pub mod timescale;
pub mod validity;

pub use error::{Error, Result};
