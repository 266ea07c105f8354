//! Evaluation metrics.
//!
//! [`regression`] covers paired prediction/target series (MSE, MAE, R²,
//! Spearman, Gaussian NLL, CRPS); [`agreement`] covers categorical and
//! ordinal agreement between annotators or systems (ICC, Cohen's kappa,
//! Jaccard overlap, the Pₖ segmentation penalty, micro-precision, and
//! label merging on confusion matrices).

pub mod agreement;
pub mod regression;

pub use agreement::{
    cohen_kappa, icc, jaccard, merge_labels, micro_precision, pk, IccVariant, PkResult,
};
pub use regression::{crps, mae, mse, nll, r2, regression_report, spearman, RegressionReport};
