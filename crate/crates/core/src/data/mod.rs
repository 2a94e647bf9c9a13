//! Dataset handling: validated daily series, CSV ingestion, descriptive
//! statistics, min-max normalization, sliding-window supervision and the
//! chronological 80/10/10 split.

mod ingest;
mod prepare;
mod series;
mod stats;

pub use ingest::{ingest_carbon_monitor, ingest_tidy, CARBON_MONITOR_SECTORS};
pub use prepare::{window_and_split, Normalizer, PreparedData, SplitRanges};
pub use series::TimeSeries;
pub use stats::{describe, DescriptiveStats};

use thiserror::Error;

/// Errors raised while loading or preparing data.
#[derive(Debug, Error)]
pub enum DataError {
    #[error("empty series")]
    EmptySeries,

    #[error("row {row}: {message}")]
    Parse { row: usize, message: String },

    #[error("row {row}: unknown sector {name:?}")]
    UnknownSector { row: usize, name: String },

    #[error("row {row}: duplicate entry for date {date} (sector {sector:?})")]
    DuplicateEntry { row: usize, date: String, sector: String },

    #[error("missing calendar day {missing} between {start} and {end}")]
    CalendarGap { missing: String, start: String, end: String },

    #[error("non-finite value {value} at index {index}")]
    NonFinite { index: usize, value: f64 },

    #[error("dates not strictly increasing at index {index}")]
    UnorderedDates { index: usize },

    #[error("series too short: {len} observations, need at least {min}")]
    SeriesTooShort { len: usize, min: usize },

    #[error("training range is constant (min = max = {value}); cannot normalize")]
    ConstantTrainRange { value: f64 },

    #[error("split ratios {ratios:?} must be positive and sum to 1")]
    BadSplitRatios { ratios: (f64, f64, f64) },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
