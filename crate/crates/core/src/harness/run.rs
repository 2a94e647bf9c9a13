//! Experiment execution: per-model fitting, test-split evaluation at both
//! scales, checkpoint assembly and multi-month forecasting.

use super::config::{ExperimentConfig, ForecastMode, MlEvalMode, ModelKind, Profile};
use super::grid::{
    grid_search_ann, grid_search_arima, grid_search_forest, grid_search_lstm, GridEvaluation,
};
use super::report::{ComparisonMeta, ComparisonRow, ComparisonTable, TracePoint};
use super::HarnessError;
use crate::boxjenkins::{self, day_of_week_exog, ArimaOrder};
use crate::checkpoint::{Checkpoint, CheckpointEnvelope, ModelCheckpoint};
use crate::data::{window_and_split, PreparedData, TimeSeries};
use crate::forest::{ForestConfig, ForestModel};
use crate::grey;
use crate::lstm::LstmNet;
use crate::metrics::{evaluate, EvaluationReport, Scale};
use crate::neural::{
    recursive_forecast, train, Activation, DenseNet, LayerSpec, TrainConfig, TrainOutcome,
    WindowPredictor,
};
use chrono::NaiveDate;

/// Physical-scale forecast with generated future dates.
#[derive(Debug, Clone, PartialEq)]
pub struct DatedForecast {
    pub dates: Vec<NaiveDate>,
    pub values: Vec<f64>,
}

/// Everything one model produced in an experiment.
#[derive(Debug, Clone)]
pub struct ModelOutcome {
    pub kind: ModelKind,
    pub config_summary: String,
    pub protocol: String,
    pub validation_mse: Option<f64>,
    pub grid_evaluations: Vec<GridEvaluation>,
    /// Test-split reports: normalized scale first, physical second.
    pub reports: Vec<EvaluationReport>,
    pub trace: Vec<TracePoint>,
    pub checkpoint: Checkpoint,
}

/// The full experiment result: per-model outcomes (in configured order),
/// recorded failures, and the assembled comparison table.
#[derive(Debug, Clone)]
pub struct ExperimentOutcome {
    pub models: Vec<ModelOutcome>,
    pub failures: Vec<(String, String)>,
    pub table: ComparisonTable,
}

/// Runs the configured models on one series: window/split/normalize once,
/// then fit, evaluate on the test split at both scales, and assemble the
/// comparison. A model failure is recorded without aborting the rest.
pub fn run_experiment(
    series: &TimeSeries,
    cfg: &ExperimentConfig,
) -> Result<ExperimentOutcome, HarnessError> {
    cfg.validate()?;
    let prepared = window_and_split(series, cfg.window_length, cfg.ratios_tuple())?;

    let mut models = Vec::new();
    let mut failures = Vec::new();
    for &kind in &cfg.models {
        match run_model(kind, &prepared, cfg) {
            Ok(outcome) => models.push(outcome),
            Err(e) => failures.push((kind.label().to_string(), e.to_string())),
        }
    }

    let mut rows = Vec::new();
    for outcome in &models {
        for report in &outcome.reports {
            rows.push(ComparisonRow::from_report(report, &outcome.protocol));
        }
    }
    let meta = ComparisonMeta {
        seed: cfg.seed,
        profile: match cfg.profile {
            Profile::Ci => "ci".into(),
            Profile::Full => "full".into(),
        },
        paper_config: cfg.paper_config,
        statistical_forecast_mode: cfg.forecast_mode.label().into(),
        generated_at_unix: None,
    };
    let table = ComparisonTable::build(meta, rows, failures.clone());

    Ok(ExperimentOutcome { models, failures, table })
}

fn run_model(
    kind: ModelKind,
    prepared: &PreparedData,
    cfg: &ExperimentConfig,
) -> Result<ModelOutcome, HarnessError> {
    match kind {
        ModelKind::Gm11 => run_gm11(prepared, cfg),
        ModelKind::Arima => run_arima(prepared, cfg, false),
        ModelKind::Sarimax => run_arima(prepared, cfg, true),
        ModelKind::Ann => run_ann(prepared, cfg),
        ModelKind::Lstm => run_lstm(prepared, cfg),
        ModelKind::RandomForest => run_forest(prepared, cfg),
    }
}

// ---------------------------------------------------------------- shared

fn model_err(kind: ModelKind, e: impl std::fmt::Display) -> HarnessError {
    HarnessError::Model { model: kind.label().to_string(), message: e.to_string() }
}

/// Builds both-scale reports and the dated trace from normalized
/// predictions over the test split.
fn evaluate_test(
    kind: ModelKind,
    prepared: &PreparedData,
    predicted_normalized: &[f64],
) -> Result<(Vec<EvaluationReport>, Vec<TracePoint>), HarnessError> {
    let split = prepared.split().clone();
    let (_, actual_normalized) = prepared.range_samples(&split.test);
    let normalizer = prepared.normalizer();
    let predicted_physical: Vec<f64> = normalizer.denormalize_all(predicted_normalized);
    let actual_physical: Vec<f64> = normalizer.denormalize_all(&actual_normalized);

    let norm_metrics =
        evaluate(&actual_normalized, predicted_normalized).map_err(|e| model_err(kind, e))?;
    let phys_metrics =
        evaluate(&actual_physical, &predicted_physical).map_err(|e| model_err(kind, e))?;

    let reports = vec![
        EvaluationReport {
            model_name: kind.label().into(),
            split_name: "test".into(),
            scale: Scale::Normalized,
            metrics: norm_metrics,
        },
        EvaluationReport {
            model_name: kind.label().into(),
            split_name: "test".into(),
            scale: Scale::Physical,
            metrics: phys_metrics,
        },
    ];

    let dates = prepared.raw().dates();
    let trace = (0..actual_normalized.len())
        .map(|i| {
            let raw_pos = prepared.target_position(split.test.start + i);
            TracePoint {
                date: dates[raw_pos],
                actual: actual_physical[i],
                predicted: predicted_physical[i],
                actual_normalized: actual_normalized[i],
                predicted_normalized: predicted_normalized[i],
            }
        })
        .collect();
    Ok((reports, trace))
}

fn envelope_ml(prepared: &PreparedData, seed: u64) -> CheckpointEnvelope {
    let normalized = prepared.normalized();
    let w = prepared.window_length();
    CheckpointEnvelope {
        model_seed: seed,
        window_length: w,
        normalizer: *prepared.normalizer(),
        last_date: prepared.raw().last_date(),
        last_window_normalized: normalized[normalized.len() - w..].to_vec(),
    }
}

fn envelope_statistical(prepared: &PreparedData, seed: u64, fit_len: usize) -> CheckpointEnvelope {
    CheckpointEnvelope {
        model_seed: seed,
        window_length: prepared.window_length(),
        normalizer: *prepared.normalizer(),
        last_date: prepared.raw().dates()[fit_len - 1],
        last_window_normalized: Vec::new(),
    }
}

/// One-step test predictions from actual lag windows, or a recursive
/// forecast across the horizon, depending on the configured mode.
fn ml_test_predictions<M: WindowPredictor>(
    model: &M,
    prepared: &PreparedData,
    mode: MlEvalMode,
) -> Vec<f64> {
    let split = prepared.split().clone();
    match mode {
        MlEvalMode::OneStep => {
            let (windows, _) = prepared.range_samples(&split.test);
            windows.iter().map(|w| model.predict_window(w)).collect()
        }
        MlEvalMode::Recursive => {
            let seed_window = prepared.window(split.test.start).to_vec();
            recursive_forecast(model, &seed_window, split.test.len())
        }
    }
}

fn ml_protocol(mode: MlEvalMode) -> &'static str {
    match mode {
        MlEvalMode::OneStep => "one-step-ahead",
        MlEvalMode::Recursive => "recursive multi-step",
    }
}

// ------------------------------------------------------------- ML models

fn ann_specs(window: usize, hidden: &[usize]) -> Vec<LayerSpec> {
    let mut specs = Vec::with_capacity(hidden.len() + 1);
    let mut fan_in = window;
    for &h in hidden {
        specs.push(LayerSpec::new(fan_in, h, Activation::Relu));
        fan_in = h;
    }
    specs.push(LayerSpec::new(fan_in, 1, Activation::Linear));
    specs
}

fn ann_train_config(cfg: &ExperimentConfig) -> TrainConfig {
    TrainConfig {
        epochs: cfg.epochs_for(cfg.ann.epochs),
        batch_size: cfg.ann.batch_size,
        adam: crate::neural::AdamConfig {
            learning_rate: cfg.ann.learning_rate,
            ..Default::default()
        },
        shuffle_seed: cfg.ann_shuffle_seed(),
    }
}

fn train_ann(
    prepared: &PreparedData,
    cfg: &ExperimentConfig,
    hidden: &[usize],
) -> Result<(DenseNet, TrainOutcome), HarnessError> {
    let specs = ann_specs(prepared.window_length(), hidden);
    let mut net =
        DenseNet::new(specs, cfg.ann_init_seed()).map_err(|e| model_err(ModelKind::Ann, e))?;
    let outcome =
        train(&mut net, prepared, &ann_train_config(cfg)).map_err(|e| model_err(ModelKind::Ann, e))?;
    Ok((net, outcome))
}

pub(super) fn train_ann_candidate(
    prepared: &PreparedData,
    cfg: &ExperimentConfig,
    hidden: &[usize],
) -> Result<f64, HarnessError> {
    train_ann(prepared, cfg, hidden).map(|(_, o)| o.best_validation_mse)
}

fn run_ann(prepared: &PreparedData, cfg: &ExperimentConfig) -> Result<ModelOutcome, HarnessError> {
    let (hidden, grid_evaluations) = if cfg.paper_config {
        (vec![12, 12], Vec::new())
    } else if cfg.grid_search {
        let outcome = grid_search_ann(prepared, cfg)?;
        (outcome.best, outcome.evaluations)
    } else {
        (cfg.ann.hidden.clone(), Vec::new())
    };

    let (net, outcome) = train_ann(prepared, cfg, &hidden)?;
    let preds = ml_test_predictions(&net, prepared, cfg.ml_eval);
    let (reports, trace) = evaluate_test(ModelKind::Ann, prepared, &preds)?;
    let checkpoint = Checkpoint {
        envelope: envelope_ml(prepared, cfg.ann_init_seed()),
        model: ModelCheckpoint::Ann {
            net,
            epoch: outcome.best_epoch,
            validation_mse: outcome.best_validation_mse,
        },
    };
    Ok(ModelOutcome {
        kind: ModelKind::Ann,
        config_summary: format!("hidden {hidden:?}, epochs {}", cfg.epochs_for(cfg.ann.epochs)),
        protocol: ml_protocol(cfg.ml_eval).into(),
        validation_mse: Some(outcome.best_validation_mse),
        grid_evaluations,
        reports,
        trace,
        checkpoint,
    })
}

fn lstm_train_config(cfg: &ExperimentConfig) -> TrainConfig {
    TrainConfig {
        epochs: cfg.epochs_for(cfg.lstm.epochs),
        batch_size: cfg.lstm.batch_size,
        adam: crate::neural::AdamConfig {
            learning_rate: cfg.lstm.learning_rate,
            ..Default::default()
        },
        shuffle_seed: cfg.lstm_shuffle_seed(),
    }
}

fn train_lstm(
    prepared: &PreparedData,
    cfg: &ExperimentConfig,
    hidden: &[usize],
) -> Result<(LstmNet, TrainOutcome), HarnessError> {
    let mut net = LstmNet::new(
        1,
        hidden,
        cfg.lstm.relu_hidden,
        prepared.window_length(),
        cfg.lstm_init_seed(),
    )
    .map_err(|e| model_err(ModelKind::Lstm, e))?;
    let outcome = train(&mut net, prepared, &lstm_train_config(cfg))
        .map_err(|e| model_err(ModelKind::Lstm, e))?;
    Ok((net, outcome))
}

pub(super) fn train_lstm_candidate(
    prepared: &PreparedData,
    cfg: &ExperimentConfig,
    hidden: &[usize],
) -> Result<f64, HarnessError> {
    train_lstm(prepared, cfg, hidden).map(|(_, o)| o.best_validation_mse)
}

fn run_lstm(prepared: &PreparedData, cfg: &ExperimentConfig) -> Result<ModelOutcome, HarnessError> {
    let (hidden, grid_evaluations) = if cfg.paper_config {
        (vec![50, 50], Vec::new())
    } else if cfg.grid_search {
        let outcome = grid_search_lstm(prepared, cfg)?;
        (outcome.best, outcome.evaluations)
    } else {
        (cfg.lstm.hidden.clone(), Vec::new())
    };

    let (net, outcome) = train_lstm(prepared, cfg, &hidden)?;
    let preds = ml_test_predictions(&net, prepared, cfg.ml_eval);
    let (reports, trace) = evaluate_test(ModelKind::Lstm, prepared, &preds)?;
    let checkpoint = Checkpoint {
        envelope: envelope_ml(prepared, cfg.lstm_init_seed()),
        model: ModelCheckpoint::Lstm {
            net,
            epoch: outcome.best_epoch,
            validation_mse: outcome.best_validation_mse,
        },
    };
    Ok(ModelOutcome {
        kind: ModelKind::Lstm,
        config_summary: format!(
            "hidden {hidden:?}, relu_hidden {}, epochs {}",
            cfg.lstm.relu_hidden,
            cfg.epochs_for(cfg.lstm.epochs)
        ),
        protocol: ml_protocol(cfg.ml_eval).into(),
        validation_mse: Some(outcome.best_validation_mse),
        grid_evaluations,
        reports,
        trace,
        checkpoint,
    })
}

fn forest_config(cfg: &ExperimentConfig, max_depth: Option<usize>) -> ForestConfig {
    ForestConfig {
        n_estimators: cfg.forest.n_estimators,
        max_depth,
        min_leaf: cfg.forest.min_leaf,
        m_try: cfg.forest.m_try,
        seed: cfg.forest_seed(),
    }
}

pub(super) fn validate_forest_candidate(
    prepared: &PreparedData,
    cfg: &ExperimentConfig,
    max_depth: Option<usize>,
) -> Result<f64, HarnessError> {
    let model = ForestModel::fit_prepared(prepared, forest_config(cfg, max_depth))
        .map_err(|e| model_err(ModelKind::RandomForest, e))?;
    let split = prepared.split().clone();
    if split.validation.is_empty() {
        return Err(model_err(ModelKind::RandomForest, "validation split is empty"));
    }
    let (windows, targets) = prepared.range_samples(&split.validation);
    let mut acc = 0.0;
    for (w, &t) in windows.iter().zip(&targets) {
        let e = model.predict(w) - t;
        acc += e * e;
    }
    Ok(acc / windows.len() as f64)
}

fn run_forest(prepared: &PreparedData, cfg: &ExperimentConfig) -> Result<ModelOutcome, HarnessError> {
    let (max_depth, grid_evaluations) = if cfg.paper_config {
        (Some(20), Vec::new())
    } else if cfg.grid_search {
        let outcome = grid_search_forest(prepared, cfg)?;
        (outcome.best, outcome.evaluations)
    } else {
        (cfg.forest.max_depth, Vec::new())
    };

    let model = ForestModel::fit_prepared(prepared, forest_config(cfg, max_depth))
        .map_err(|e| model_err(ModelKind::RandomForest, e))?;
    let validation_mse = validate_forest_candidate(prepared, cfg, max_depth)?;
    let preds = ml_test_predictions(&model, prepared, cfg.ml_eval);
    let (reports, trace) = evaluate_test(ModelKind::RandomForest, prepared, &preds)?;
    let checkpoint = Checkpoint {
        envelope: envelope_ml(prepared, cfg.forest_seed()),
        model: ModelCheckpoint::Forest { model },
    };
    Ok(ModelOutcome {
        kind: ModelKind::RandomForest,
        config_summary: format!(
            "{} trees, depth {max_depth:?}, seed {}",
            cfg.forest.n_estimators,
            cfg.forest_seed()
        ),
        protocol: ml_protocol(cfg.ml_eval).into(),
        validation_mse: Some(validation_mse),
        grid_evaluations,
        reports,
        trace,
        checkpoint,
    })
}

// ---------------------------------------------------------- statistical

fn run_gm11(prepared: &PreparedData, cfg: &ExperimentConfig) -> Result<ModelOutcome, HarnessError> {
    let pre_test = prepared.pre_test_raw_values();
    let tail_start = cfg
        .grey
        .fit_window
        .map_or(0, |k| pre_test.len().saturating_sub(k));
    let fit_values = &pre_test[tail_start..];
    let model = grey::fit(fit_values).map_err(|e| model_err(ModelKind::Gm11, e))?;

    // validation diagnostic: same protocol against the validation horizon
    let pre_val = prepared.pre_validation_raw_values();
    let val_tail = cfg.grey.fit_window.map_or(0, |k| pre_val.len().saturating_sub(k));
    let validation_mse = grey::fit(&pre_val[val_tail..]).ok().filter(|_| {
        !prepared.split().validation.is_empty()
    }).map(|m| {
        let split = prepared.split().clone();
        let horizon = split.validation.len();
        let forecast = m.forecast(horizon);
        let normalized = prepared.normalizer().normalize_all(&forecast);
        let (_, targets) = prepared.range_samples(&split.validation);
        normalized.iter().zip(&targets).map(|(p, t)| (p - t) * (p - t)).sum::<f64>()
            / horizon as f64
    });

    let horizon = prepared.split().test.len();
    let physical = model.forecast(horizon);
    let normalized = prepared.normalizer().normalize_all(&physical);
    let (reports, trace) = evaluate_test(ModelKind::Gm11, prepared, &normalized)?;
    let checkpoint = Checkpoint {
        envelope: envelope_statistical(prepared, cfg.seed, pre_test.len()),
        model: ModelCheckpoint::Gm11 { model },
    };
    Ok(ModelOutcome {
        kind: ModelKind::Gm11,
        config_summary: format!("fit window {} observations", fit_values.len()),
        protocol: ForecastMode::FixedOrigin.label().into(),
        validation_mse,
        grid_evaluations: Vec::new(),
        reports,
        trace,
        checkpoint,
    })
}

/// Fixed-origin validation score for one ARIMA/SARIMAX order: fit before
/// the validation split, forecast across it, MSE on the normalized scale.
pub(super) fn forecast_validation_arima(
    prepared: &PreparedData,
    order: ArimaOrder,
    calendar_exog: bool,
) -> Result<f64, HarnessError> {
    let kind = if order.season_length > 0 || calendar_exog { ModelKind::Sarimax } else { ModelKind::Arima };
    let pre_val = prepared.pre_validation_raw_values();
    let split = prepared.split().clone();
    let horizon = split.validation.len();
    if horizon == 0 {
        return Err(model_err(kind, "validation split is empty"));
    }
    let dates = prepared.raw().dates();

    let (exog, future_exog) = if calendar_exog {
        let fit_rows = day_of_week_exog(&dates[..pre_val.len()]);
        let future_rows = day_of_week_exog(&dates[pre_val.len()..pre_val.len() + horizon]);
        (Some(fit_rows), Some(future_rows))
    } else {
        (None, None)
    };

    let model = boxjenkins::fit(pre_val, order, exog.as_deref()).map_err(|e| model_err(kind, e))?;
    let physical = boxjenkins::forecast(&model, horizon, future_exog.as_deref())
        .map_err(|e| model_err(kind, e))?;
    let normalized = prepared.normalizer().normalize_all(&physical);
    let (_, targets) = prepared.range_samples(&split.validation);
    Ok(normalized.iter().zip(&targets).map(|(p, t)| (p - t) * (p - t)).sum::<f64>()
        / horizon as f64)
}

fn run_arima(
    prepared: &PreparedData,
    cfg: &ExperimentConfig,
    seasonal: bool,
) -> Result<ModelOutcome, HarnessError> {
    let kind = if seasonal { ModelKind::Sarimax } else { ModelKind::Arima };
    let calendar_exog = seasonal && cfg.sarimax.calendar_exog && !cfg.paper_config;

    let configured_order = if seasonal {
        let s = &cfg.sarimax;
        ArimaOrder::new(s.p, s.d, s.q).with_seasonal(
            s.seasonal_p, s.seasonal_d, s.seasonal_q, s.season_length,
        )
    } else {
        ArimaOrder::new(cfg.arima.p, cfg.arima.d, cfg.arima.q)
    };

    let (order, grid_evaluations) = if cfg.paper_config {
        let order = if seasonal {
            ArimaOrder::new(0, 1, 3).with_seasonal(0, 0, 0, 7)
        } else {
            ArimaOrder::new(0, 1, 3)
        };
        (order, Vec::new())
    } else if cfg.grid_search {
        let outcome =
            grid_search_arima(prepared, cfg, seasonal.then_some(&cfg.sarimax))?;
        (outcome.best, outcome.evaluations)
    } else {
        (configured_order, Vec::new())
    };
    order.validate().map_err(|e| model_err(kind, e))?;

    let validation_mse = forecast_validation_arima(prepared, order, calendar_exog).ok();

    let pre_test = prepared.pre_test_raw_values();
    let split = prepared.split().clone();
    let horizon = split.test.len();
    let dates = prepared.raw().dates();
    let (exog, future_exog) = if calendar_exog {
        (
            Some(day_of_week_exog(&dates[..pre_test.len()])),
            Some(day_of_week_exog(&dates[pre_test.len()..pre_test.len() + horizon])),
        )
    } else {
        (None, None)
    };

    let model =
        boxjenkins::fit(pre_test, order, exog.as_deref()).map_err(|e| model_err(kind, e))?;

    let (physical, protocol) = match cfg.forecast_mode {
        ForecastMode::FixedOrigin => {
            let f = boxjenkins::forecast(&model, horizon, future_exog.as_deref())
                .map_err(|e| model_err(kind, e))?;
            (f, ForecastMode::FixedOrigin.label())
        }
        ForecastMode::Rolling => {
            let full_values = prepared.raw().values();
            let full_exog = calendar_exog.then(|| day_of_week_exog(dates));
            let preds = boxjenkins::one_step_predictions(&model, full_values, full_exog.as_deref())
                .map_err(|e| model_err(kind, e))?;
            let offset = full_values.len() - preds.len();
            let first_target = prepared.target_position(split.test.start);
            let f = preds[first_target - offset..].to_vec();
            (f, ForecastMode::Rolling.label())
        }
    };
    let normalized = prepared.normalizer().normalize_all(&physical);
    let (reports, trace) = evaluate_test(kind, prepared, &normalized)?;

    let model_ckpt = if seasonal {
        ModelCheckpoint::Sarimax { model: model.clone() }
    } else {
        ModelCheckpoint::Arima { model: model.clone() }
    };
    let checkpoint = Checkpoint {
        envelope: envelope_statistical(prepared, cfg.seed, pre_test.len()),
        model: model_ckpt,
    };

    let mut config_summary = format!("order {}", order.label());
    if calendar_exog {
        config_summary.push_str(", day-of-week exog");
    }
    if let Some(w) = &model.stability_warning {
        config_summary.push_str(&format!(" [warning: {w}]"));
    }

    Ok(ModelOutcome {
        kind,
        config_summary,
        protocol: protocol.into(),
        validation_mse,
        grid_evaluations,
        reports,
        trace,
        checkpoint,
    })
}

/// Re-evaluates a checkpointed model on prepared data's test split: ML
/// models predict one-step from actual lag windows; statistical models
/// replay their fixed-origin forecast across the horizon. The prepared
/// data must come from the dataset the checkpoint was trained on for the
/// statistical tails to line up.
pub fn evaluate_checkpoint(
    checkpoint: &Checkpoint,
    prepared: &PreparedData,
) -> Result<Vec<EvaluationReport>, HarnessError> {
    let horizon = prepared.split().test.len();
    let (kind, normalized_preds) = match &checkpoint.model {
        ModelCheckpoint::Gm11 { model } => {
            let physical = model.forecast(horizon);
            (ModelKind::Gm11, prepared.normalizer().normalize_all(&physical))
        }
        ModelCheckpoint::Arima { model } | ModelCheckpoint::Sarimax { model } => {
            let kind = if matches!(checkpoint.model, ModelCheckpoint::Arima { .. }) {
                ModelKind::Arima
            } else {
                ModelKind::Sarimax
            };
            let future_exog = (!model.exog_coeffs.is_empty()).then(|| {
                let dates: Vec<NaiveDate> = (1..=horizon as i64)
                    .map(|i| checkpoint.envelope.last_date + chrono::Duration::days(i))
                    .collect();
                day_of_week_exog(&dates)
            });
            let physical = boxjenkins::forecast(model, horizon, future_exog.as_deref())
                .map_err(|e| model_err(kind, e))?;
            (kind, prepared.normalizer().normalize_all(&physical))
        }
        ModelCheckpoint::Ann { net, .. } => {
            (ModelKind::Ann, ml_test_predictions(net, prepared, MlEvalMode::OneStep))
        }
        ModelCheckpoint::Lstm { net, .. } => {
            (ModelKind::Lstm, ml_test_predictions(net, prepared, MlEvalMode::OneStep))
        }
        ModelCheckpoint::Forest { model } => (
            ModelKind::RandomForest,
            ml_test_predictions(model, prepared, MlEvalMode::OneStep),
        ),
    };
    let (reports, _) = evaluate_test(kind, prepared, &normalized_preds)?;
    Ok(reports)
}

// ------------------------------------------------------------- forecasts

/// Recursive multi-month forecast from a checkpoint: physical-scale
/// values with generated future dates, continuing the checkpoint's
/// calendar.
pub fn forecast_future(checkpoint: &Checkpoint, horizon: usize) -> Result<DatedForecast, HarnessError> {
    if horizon == 0 {
        return Err(HarnessError::BadConfig { message: "horizon must be ≥ 1".into() });
    }
    let env = &checkpoint.envelope;
    let dates: Vec<NaiveDate> =
        (1..=horizon as i64).map(|i| env.last_date + chrono::Duration::days(i)).collect();

    let values = match &checkpoint.model {
        ModelCheckpoint::Gm11 { model } => model.forecast(horizon),
        ModelCheckpoint::Arima { model } | ModelCheckpoint::Sarimax { model } => {
            let future_exog = (!model.exog_coeffs.is_empty()).then(|| day_of_week_exog(&dates));
            boxjenkins::forecast(model, horizon, future_exog.as_deref())
                .map_err(|e| HarnessError::Model {
                    model: checkpoint.model_tag().into(),
                    message: e.to_string(),
                })?
        }
        ModelCheckpoint::Ann { net, .. } => {
            let normalized = recursive_forecast(net, &env.last_window_normalized, horizon);
            env.normalizer.denormalize_all(&normalized)
        }
        ModelCheckpoint::Lstm { net, .. } => {
            let normalized = recursive_forecast(net, &env.last_window_normalized, horizon);
            env.normalizer.denormalize_all(&normalized)
        }
        ModelCheckpoint::Forest { model } => {
            let normalized = recursive_forecast(model, &env.last_window_normalized, horizon);
            env.normalizer.denormalize_all(&normalized)
        }
    };

    Ok(DatedForecast { dates, values })
}
