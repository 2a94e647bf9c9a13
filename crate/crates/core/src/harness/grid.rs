//! Exhaustive hyperparameter search scored by validation MSE.
//!
//! Candidates are enumerated in a fixed order and compared strictly, so
//! ties resolve to the earliest candidate. Individual fit failures are
//! recorded and skipped; a search only errors when every candidate fails.

use super::config::{ExperimentConfig, SarimaxSettings};
use super::run::{
    forecast_validation_arima, train_ann_candidate, train_lstm_candidate, validate_forest_candidate,
};
use super::HarnessError;
use crate::boxjenkins::ArimaOrder;
use crate::data::PreparedData;
use serde::{Deserialize, Serialize};

/// One candidate's outcome within a grid search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridEvaluation {
    pub candidate: String,
    pub validation_mse: Option<f64>,
    pub error: Option<String>,
}

/// Search winner plus the full evaluation record.
#[derive(Debug, Clone)]
pub struct GridOutcome<T> {
    pub best: T,
    pub best_score: f64,
    pub evaluations: Vec<GridEvaluation>,
}

fn pick_best<T: Clone>(
    family: &str,
    candidates: Vec<(T, String, Result<f64, String>)>,
) -> Result<GridOutcome<T>, HarnessError> {
    let mut evaluations = Vec::with_capacity(candidates.len());
    let mut best: Option<(T, f64)> = None;
    let mut first_error: Option<String> = None;
    for (config, label, result) in candidates {
        match result {
            Ok(score) => {
                evaluations.push(GridEvaluation {
                    candidate: label,
                    validation_mse: Some(score),
                    error: None,
                });
                let better = best.as_ref().is_none_or(|(_, s)| score < *s);
                if better && score.is_finite() {
                    best = Some((config, score));
                }
            }
            Err(message) => {
                if first_error.is_none() {
                    first_error = Some(message.clone());
                }
                evaluations.push(GridEvaluation {
                    candidate: label,
                    validation_mse: None,
                    error: Some(message),
                });
            }
        }
    }
    match best {
        Some((config, score)) => {
            Ok(GridOutcome { best: config, best_score: score, evaluations })
        }
        None => Err(HarnessError::AllCandidatesFailed {
            family: family.to_string(),
            first_error: first_error.unwrap_or_else(|| "no candidates".into()),
        }),
    }
}

/// ARIMA order search over the configured (p, d, q) axes. When `seasonal`
/// is given the candidates inherit its seasonal order and exogenous
/// setting (the SARIMAX search).
pub fn grid_search_arima(
    prepared: &PreparedData,
    cfg: &ExperimentConfig,
    seasonal: Option<&SarimaxSettings>,
) -> Result<GridOutcome<ArimaOrder>, HarnessError> {
    let (ps, ds, qs) = cfg.grids.arima_axes();
    let mut candidates = Vec::new();
    for &p in &ps {
        for &d in &ds {
            for &q in &qs {
                let order = match seasonal {
                    Some(s) => ArimaOrder::new(p, d, q).with_seasonal(
                        s.seasonal_p, s.seasonal_d, s.seasonal_q, s.season_length,
                    ),
                    None => ArimaOrder::new(p, d, q),
                };
                let result =
                    forecast_validation_arima(prepared, order, seasonal.is_some_and(|s| s.calendar_exog))
                        .map_err(|e| e.to_string());
                candidates.push((order, order.label(), result));
            }
        }
    }
    pick_best(if seasonal.is_some() { "sarimax" } else { "arima" }, candidates)
}

/// Dense-net width search (each candidate uses two hidden layers of the
/// candidate width, matching the benchmark architecture family).
pub fn grid_search_ann(
    prepared: &PreparedData,
    cfg: &ExperimentConfig,
) -> Result<GridOutcome<Vec<usize>>, HarnessError> {
    let mut candidates = Vec::new();
    for width in cfg.grids.ann_widths() {
        let hidden = vec![width, width];
        let result = train_ann_candidate(prepared, cfg, &hidden).map_err(|e| e.to_string());
        candidates.push((hidden, format!("hidden {width}x{width}"), result));
    }
    pick_best("ann", candidates)
}

/// LSTM width search.
pub fn grid_search_lstm(
    prepared: &PreparedData,
    cfg: &ExperimentConfig,
) -> Result<GridOutcome<Vec<usize>>, HarnessError> {
    let mut candidates = Vec::new();
    for width in cfg.grids.lstm_widths() {
        let hidden = vec![width, width];
        let result = train_lstm_candidate(prepared, cfg, &hidden).map_err(|e| e.to_string());
        candidates.push((hidden, format!("hidden {width}x{width}"), result));
    }
    pick_best("lstm", candidates)
}

/// Forest depth search.
pub fn grid_search_forest(
    prepared: &PreparedData,
    cfg: &ExperimentConfig,
) -> Result<GridOutcome<Option<usize>>, HarnessError> {
    let mut candidates = Vec::new();
    for depth in cfg.grids.forest_depths() {
        let label = depth.map_or("depth none".to_string(), |d| format!("depth {d}"));
        let result = validate_forest_candidate(prepared, cfg, depth).map_err(|e| e.to_string());
        candidates.push((depth, label, result));
    }
    pick_best("random_forest", candidates)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{window_and_split, TimeSeries};
    use chrono::NaiveDate;

    fn prepared() -> PreparedData {
        let start = NaiveDate::from_ymd_opt(2020, 1, 1).unwrap();
        let values: Vec<f64> = (0..120)
            .map(|t| 25.0 + (t as f64 * 0.25).sin() * 3.0 + (t % 5) as f64 * 0.2)
            .collect();
        let series = TimeSeries::from_start_date(start, values).unwrap();
        window_and_split(&series, 3, (0.8, 0.1, 0.1)).unwrap()
    }

    #[test]
    fn singleton_grid_returns_that_config() {
        let prepared = prepared();
        let cfg = ExperimentConfig {
            grids: crate::harness::GridSpecs {
                arima_p: vec![1],
                arima_d: vec![0],
                arima_q: vec![0],
                ..Default::default()
            },
            ..ExperimentConfig::default()
        };
        let outcome = grid_search_arima(&prepared, &cfg, None).unwrap();
        assert_eq!(outcome.best, ArimaOrder::new(1, 0, 0));
        assert_eq!(outcome.evaluations.len(), 1);
    }

    #[test]
    fn constructed_two_point_grid_has_a_forced_winner() {
        // depth-1 stumps cannot fit a three-regime target; deeper trees can
        let prepared = prepared();
        let cfg = ExperimentConfig {
            grids: crate::harness::GridSpecs {
                forest_depth: vec![1, 8],
                ..Default::default()
            },
            forest: crate::harness::ForestSettings {
                n_estimators: 10,
                ..Default::default()
            },
            ..ExperimentConfig::default()
        };
        let outcome = grid_search_forest(&prepared, &cfg).unwrap();
        assert_eq!(outcome.best, Some(8));
        let scores: Vec<f64> =
            outcome.evaluations.iter().map(|e| e.validation_mse.unwrap()).collect();
        assert!(scores[1] < scores[0], "deep {} vs stump {}", scores[1], scores[0]);
    }

    #[test]
    fn ties_resolve_to_enumeration_order() {
        let evals = vec![
            ((), "a".to_string(), Ok(1.0)),
            ((), "b".to_string(), Ok(1.0)),
        ];
        let out = pick_best("x", evals).unwrap();
        assert_eq!(out.best_score, 1.0);
        assert_eq!(out.evaluations[0].candidate, "a");
    }

    #[test]
    fn all_failures_aggregate() {
        let evals: Vec<((), String, Result<f64, String>)> = vec![
            ((), "a".to_string(), Err("boom".into())),
            ((), "b".to_string(), Err("bang".into())),
        ];
        let err = pick_best("family", evals).unwrap_err();
        assert!(matches!(err, HarnessError::AllCandidatesFailed { .. }));
        assert!(err.to_string().contains("boom"));
    }
}
