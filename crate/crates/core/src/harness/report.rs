//! Comparison-table assembly and the serialized output forms.

use crate::metrics::{EvaluationReport, Scale};
use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

/// One dated point of a model's test-split trace, at both scales.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub date: NaiveDate,
    pub actual: f64,
    pub predicted: f64,
    pub actual_normalized: f64,
    pub predicted_normalized: f64,
}

/// One comparison row: a model's five criteria on one scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub model: String,
    pub protocol: String,
    pub scale: Scale,
    pub mse: f64,
    pub rmse: f64,
    pub mae: f64,
    pub mape_percent: Option<f64>,
    pub r2: Option<f64>,
    pub n: usize,
}

impl ComparisonRow {
    pub fn from_report(report: &EvaluationReport, protocol: &str) -> Self {
        ComparisonRow {
            model: report.model_name.clone(),
            protocol: protocol.to_string(),
            scale: report.scale,
            mse: report.metrics.mse,
            rmse: report.metrics.rmse,
            mae: report.metrics.mae,
            mape_percent: report.metrics.mape_percent,
            r2: report.metrics.r2,
            n: report.metrics.n,
        }
    }
}

/// Winners per criterion, judged on the normalized scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionWinners {
    pub mse: String,
    pub rmse: String,
    pub mae: String,
    pub mape_percent: Option<String>,
    pub r2: Option<String>,
}

/// Run metadata carried inside `comparison.json`. The timestamp is the
/// only non-deterministic field and is excluded from byte comparisons.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonMeta {
    pub seed: u64,
    pub profile: String,
    pub paper_config: bool,
    pub statistical_forecast_mode: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generated_at_unix: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonTable {
    pub meta: ComparisonMeta,
    pub rows: Vec<ComparisonRow>,
    pub best_per_criterion: CriterionWinners,
    /// Winner of the majority of the five criteria, ties broken by MSE.
    pub overall_winner: String,
    /// Models that failed, with their error messages.
    pub failures: Vec<(String, String)>,
}

impl ComparisonTable {
    /// Builds the table from per-model normalized/physical row pairs.
    pub fn build(
        meta: ComparisonMeta,
        rows: Vec<ComparisonRow>,
        failures: Vec<(String, String)>,
    ) -> Self {
        let normalized: Vec<&ComparisonRow> =
            rows.iter().filter(|r| r.scale == Scale::Normalized).collect();

        let argbest = |better: &dyn Fn(&ComparisonRow, &ComparisonRow) -> bool| -> Option<String> {
            let mut best: Option<&ComparisonRow> = None;
            for row in &normalized {
                best = match best {
                    None => Some(row),
                    Some(b) => {
                        if better(row, b) {
                            Some(row)
                        } else {
                            Some(b)
                        }
                    }
                };
            }
            best.map(|r| r.model.clone())
        };

        let mse_w = argbest(&|a, b| a.mse < b.mse);
        let rmse_w = argbest(&|a, b| a.rmse < b.rmse);
        let mae_w = argbest(&|a, b| a.mae < b.mae);
        let mape_w = {
            let defined: Vec<&&ComparisonRow> =
                normalized.iter().filter(|r| r.mape_percent.is_some()).collect();
            defined
                .iter()
                .min_by(|a, b| {
                    a.mape_percent
                        .unwrap()
                        .partial_cmp(&b.mape_percent.unwrap())
                        .expect("finite mape")
                })
                .map(|r| r.model.clone())
        };
        let r2_w = {
            let defined: Vec<&&ComparisonRow> =
                normalized.iter().filter(|r| r.r2.is_some()).collect();
            defined
                .iter()
                .max_by(|a, b| a.r2.unwrap().partial_cmp(&b.r2.unwrap()).expect("finite r2"))
                .map(|r| r.model.clone())
        };

        // majority vote over the five criteria, ties broken by MSE
        let mut votes: Vec<(String, usize)> = Vec::new();
        let mut cast = |winner: &Option<String>| {
            if let Some(name) = winner {
                match votes.iter_mut().find(|(n, _)| n == name) {
                    Some((_, count)) => *count += 1,
                    None => votes.push((name.clone(), 1)),
                }
            }
        };
        cast(&mse_w);
        cast(&rmse_w);
        cast(&mae_w);
        cast(&mape_w);
        cast(&r2_w);
        let max_votes = votes.iter().map(|(_, c)| *c).max().unwrap_or(0);
        let overall_winner = votes
            .iter()
            .filter(|(_, c)| *c == max_votes)
            .map(|(name, _)| name)
            .min_by(|a, b| {
                let mse_of = |name: &str| {
                    normalized
                        .iter()
                        .find(|r| r.model == *name)
                        .map(|r| r.mse)
                        .unwrap_or(f64::INFINITY)
                };
                mse_of(a).partial_cmp(&mse_of(b)).expect("finite mse")
            })
            .cloned()
            .unwrap_or_default();

        ComparisonTable {
            meta,
            rows,
            best_per_criterion: CriterionWinners {
                mse: mse_w.unwrap_or_default(),
                rmse: rmse_w.unwrap_or_default(),
                mae: mae_w.unwrap_or_default(),
                mape_percent: mape_w,
                r2: r2_w,
            },
            overall_winner,
            failures,
        }
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serializes")
    }

    /// CSV form: one row per (model, scale).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("model,protocol,scale,mse,rmse,mae,mape_percent,r2,n\n");
        for row in &self.rows {
            let opt = |v: Option<f64>| v.map(|x| format!("{x:.17e}")).unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{:.17e},{:.17e},{:.17e},{},{},{}\n",
                row.model,
                row.protocol,
                row.scale,
                row.mse,
                row.rmse,
                row.mae,
                opt(row.mape_percent),
                opt(row.r2),
                row.n,
            ));
        }
        out
    }

    /// Rows on one scale, in table order.
    pub fn rows_at(&self, scale: Scale) -> Vec<&ComparisonRow> {
        self.rows.iter().filter(|r| r.scale == scale).collect()
    }
}

/// Renders a trace as `date,actual,predicted,actual_normalized,predicted_normalized`.
pub fn trace_to_csv(trace: &[TracePoint]) -> String {
    let mut out = String::from("date,actual,predicted,actual_normalized,predicted_normalized\n");
    for p in trace {
        out.push_str(&format!(
            "{},{:.17e},{:.17e},{:.17e},{:.17e}\n",
            p.date, p.actual, p.predicted, p.actual_normalized, p.predicted_normalized
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(model: &str, mse: f64, r2: f64) -> ComparisonRow {
        ComparisonRow {
            model: model.into(),
            protocol: "one-step-ahead".into(),
            scale: Scale::Normalized,
            mse,
            rmse: mse.sqrt(),
            mae: mse.sqrt() * 0.8,
            mape_percent: Some(mse * 100.0),
            r2: Some(r2),
            n: 101,
        }
    }

    fn meta() -> ComparisonMeta {
        ComparisonMeta {
            seed: 42,
            profile: "ci".into(),
            paper_config: true,
            statistical_forecast_mode: "fixed-origin multi-step".into(),
            generated_at_unix: None,
        }
    }

    #[test]
    fn winner_takes_majority_of_criteria() {
        let rows = vec![row("lstm", 3.5e-4, 0.98), row("ann", 4.0e-4, 0.97), row("gm11", 0.02, -0.04)];
        let table = ComparisonTable::build(meta(), rows, vec![]);
        assert_eq!(table.overall_winner, "lstm");
        assert_eq!(table.best_per_criterion.mse, "lstm");
        assert_eq!(table.best_per_criterion.r2.as_deref(), Some("lstm"));
    }

    #[test]
    fn single_model_table() {
        let table = ComparisonTable::build(meta(), vec![row("gm11", 0.02, -0.04)], vec![]);
        assert_eq!(table.overall_winner, "gm11");
        assert_eq!(table.rows.len(), 1);
    }

    #[test]
    fn json_excludes_timestamp_when_none() {
        let table = ComparisonTable::build(meta(), vec![row("ann", 1.0, 0.5)], vec![]);
        let json = table.to_json_pretty();
        assert!(!json.contains("generated_at_unix"));
        let back: ComparisonTable = serde_json::from_str(&json).unwrap();
        assert_eq!(back, table);
    }

    #[test]
    fn csv_has_one_line_per_row_plus_header() {
        let table =
            ComparisonTable::build(meta(), vec![row("ann", 1.0, 0.5), row("lstm", 0.5, 0.7)], vec![]);
        assert_eq!(table.to_csv().lines().count(), 3);
    }
}
