//! chronocast: a univariate daily time-series forecasting toolkit.
//!
//! The crate implements three statistical forecasters (grey prediction
//! GM(1,1), ARIMA and SARIMAX estimated by conditional sum of squares) and
//! three machine-learning forecasters (a dense feed-forward network, a
//! random-forest regressor and a two-layer LSTM, all trained from scratch
//! with Adam), together with the shared plumbing needed to benchmark them
//! on one dataset: ingestion, descriptive statistics, min-max
//! normalization, sliding-window supervision, a chronological 80/10/10
//! split, five accuracy criteria (MSE, RMSE, MAE, MAPE, R²), grid search
//! over hyperparameters, checkpointing and multi-month recursive
//! forecasting.
//!
//! Everything is deterministic under a fixed seed: seeded ChaCha streams
//! drive weight initialization, epoch shuffling and bootstrap resampling,
//! and all reductions run in a fixed order.
//!
//! Module map:
//! - [`data`]: loading, validation, statistics, normalization, windowing.
//! - [`metrics`]: the five evaluation criteria.
//! - [`grey`]: GM(1,1) accumulation/least-squares/forecast.
//! - [`boxjenkins`]: differencing, ADF, CSS ARIMA/SARIMAX, Ljung-Box.
//! - [`neural`]: dense network, Adam, mini-batch training, checkpoint policy.
//! - [`lstm`]: LSTM cells, full backpropagation through time.
//! - [`forest`]: CART regression trees and bagging.
//! - [`checkpoint`]: textual model checkpoints.
//! - [`harness`]: the end-to-end comparison experiment.

pub mod boxjenkins;
pub mod checkpoint;
pub mod data;
pub mod forest;
pub mod grey;
pub mod harness;
pub mod lstm;
pub mod metrics;
pub mod neural;

mod linalg;

pub use data::{DescriptiveStats, Normalizer, PreparedData, TimeSeries};
pub use harness::{ExperimentConfig, ExperimentOutcome, ModelKind};
pub use metrics::{evaluate, EvaluationReport, MetricSet};
