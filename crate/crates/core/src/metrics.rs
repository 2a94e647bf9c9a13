//! The five evaluation criteria: MSE, RMSE, MAE, MAPE and R².
//!
//! MAPE divides by each actual value and R² divides by the total sum of
//! squares, so both can be undefined; they are reported as `None` rather
//! than silently dropping terms or fabricating a number.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("length mismatch: {actual} actual vs {predicted} predicted values")]
    LengthMismatch { actual: usize, predicted: usize },

    #[error("empty input")]
    Empty,

    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },
}

/// The five criteria over one (actual, predicted) pair of sequences.
///
/// `mape_percent` is `None` when some actual value is exactly zero;
/// `r2` is `None` when the actuals have zero variance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricSet {
    pub mse: f64,
    pub rmse: f64,
    pub mae: f64,
    pub mape_percent: Option<f64>,
    pub r2: Option<f64>,
    pub n: usize,
}

/// Which value scale a report was computed on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    Normalized,
    Physical,
}

impl std::fmt::Display for Scale {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Scale::Normalized => write!(f, "normalized"),
            Scale::Physical => write!(f, "physical"),
        }
    }
}

/// A [`MetricSet`] tagged with the model, split and scale it describes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub model_name: String,
    pub split_name: String,
    pub scale: Scale,
    #[serde(flatten)]
    pub metrics: MetricSet,
}

impl EvaluationReport {
    /// One CSV row: `model,split,scale,mse,rmse,mae,mape_percent,r2,n`.
    /// Undefined criteria serialize as empty cells.
    pub fn csv_row(&self) -> String {
        let opt = |v: Option<f64>| v.map(|x| format!("{x:.17e}")).unwrap_or_default();
        format!(
            "{},{},{},{:.17e},{:.17e},{:.17e},{},{},{}",
            self.model_name,
            self.split_name,
            self.scale,
            self.metrics.mse,
            self.metrics.rmse,
            self.metrics.mae,
            opt(self.metrics.mape_percent),
            opt(self.metrics.r2),
            self.metrics.n,
        )
    }

    pub const CSV_HEADER: &'static str = "model,split,scale,mse,rmse,mae,mape_percent,r2,n";
}

/// Computes the five criteria for equal-length finite sequences.
pub fn evaluate(actual: &[f64], predicted: &[f64]) -> Result<MetricSet, MetricsError> {
    if actual.len() != predicted.len() {
        return Err(MetricsError::LengthMismatch {
            actual: actual.len(),
            predicted: predicted.len(),
        });
    }
    if actual.is_empty() {
        return Err(MetricsError::Empty);
    }
    for (index, (&a, &p)) in actual.iter().zip(predicted).enumerate() {
        if !a.is_finite() || !p.is_finite() {
            return Err(MetricsError::NonFinite { index });
        }
    }

    let n = actual.len();
    let nf = n as f64;

    let mut sq_sum = 0.0;
    let mut abs_sum = 0.0;
    let mut pct_sum = 0.0;
    let mut any_zero_actual = false;
    for (&a, &p) in actual.iter().zip(predicted) {
        let e = p - a;
        sq_sum += e * e;
        abs_sum += e.abs();
        if a == 0.0 {
            any_zero_actual = true;
        } else {
            pct_sum += (e / a).abs();
        }
    }
    let mse = sq_sum / nf;
    let mae = abs_sum / nf;
    let mape_percent = if any_zero_actual { None } else { Some(pct_sum / nf * 100.0) };

    let mean_actual = actual.iter().sum::<f64>() / nf;
    let tss: f64 = actual.iter().map(|&a| (a - mean_actual).powi(2)).sum();
    let r2 = if tss > 0.0 { Some(1.0 - sq_sum / tss) } else { None };

    Ok(MetricSet { mse, rmse: mse.sqrt(), mae, mape_percent, r2, n })
}
