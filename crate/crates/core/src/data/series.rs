//! The validated daily time series every other module consumes.

use super::DataError;
use chrono::{Duration, NaiveDate};

/// An ordered daily series of finite values (Mt CO₂ per day in the
/// benchmark dataset, but the container is unit-agnostic).
///
/// Construction guarantees:
/// - at least one observation,
/// - all values finite,
/// - dates strictly increasing with no duplicates,
/// - gapless at daily frequency (a missing calendar day is an error).
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    dates: Vec<NaiveDate>,
    values: Vec<f64>,
}

impl TimeSeries {
    /// Validates and wraps parallel date/value vectors.
    pub fn new(dates: Vec<NaiveDate>, values: Vec<f64>) -> Result<Self, DataError> {
        if dates.is_empty() || values.is_empty() {
            return Err(DataError::EmptySeries);
        }
        assert_eq!(dates.len(), values.len(), "dates and values must align");
        for (index, &value) in values.iter().enumerate() {
            if !value.is_finite() {
                return Err(DataError::NonFinite { index, value });
            }
        }
        for index in 1..dates.len() {
            if dates[index] <= dates[index - 1] {
                return Err(DataError::UnorderedDates { index });
            }
            if dates[index] - dates[index - 1] != Duration::days(1) {
                return Err(DataError::CalendarGap {
                    missing: (dates[index - 1] + Duration::days(1)).to_string(),
                    start: dates[0].to_string(),
                    end: dates[dates.len() - 1].to_string(),
                });
            }
        }
        Ok(TimeSeries { dates, values })
    }

    /// Convenience constructor for tests: consecutive days from `start`.
    pub fn from_start_date(start: NaiveDate, values: Vec<f64>) -> Result<Self, DataError> {
        let dates = (0..values.len() as i64).map(|i| start + Duration::days(i)).collect();
        TimeSeries::new(dates, values)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Never true for a constructed series; present for completeness.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn first_date(&self) -> NaiveDate {
        self.dates[0]
    }

    pub fn last_date(&self) -> NaiveDate {
        self.dates[self.dates.len() - 1]
    }

    /// Dates for `horizon` days immediately after the series ends.
    pub fn future_dates(&self, horizon: usize) -> Vec<NaiveDate> {
        (1..=horizon as i64).map(|i| self.last_date() + Duration::days(i)).collect()
    }
}
