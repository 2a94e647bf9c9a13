//! The benchmark harness: prepares one dataset, runs each configured
//! model through grid search / training / test-split evaluation at both
//! scales, assembles the comparison table and per-model prediction
//! traces, and produces multi-month forecasts from checkpoints.

mod config;
mod grid;
mod report;
mod run;

pub use config::{
    AnnSettings, ArimaSettings, DataFormat, DataSourceConfig, ExperimentConfig, ForecastMode,
    ForestSettings, GreySettings, GridSpecs, LstmSettings, MlEvalMode, ModelKind, Profile, SarimaxSettings,
};
pub use grid::{
    grid_search_ann, grid_search_arima, grid_search_forest, grid_search_lstm, GridEvaluation,
    GridOutcome,
};
pub use report::{trace_to_csv, ComparisonMeta, ComparisonRow, ComparisonTable, TracePoint};
pub use run::{
    evaluate_checkpoint, forecast_future, run_experiment, DatedForecast, ExperimentOutcome,
    ModelOutcome,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Data(#[from] crate::data::DataError),

    #[error("invalid experiment configuration: {message}")]
    BadConfig { message: String },

    #[error("grid search for {family} failed on every candidate: {first_error}")]
    AllCandidatesFailed { family: String, first_error: String },

    #[error("model {model} failed: {message}")]
    Model { model: String, message: String },

    #[error(transparent)]
    Checkpoint(#[from] crate::checkpoint::CheckpointError),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
