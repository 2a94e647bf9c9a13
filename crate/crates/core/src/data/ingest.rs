//! CSV ingestion for the two supported input layouts.
//!
//! Format A ("carbon-monitor"): `country,date,sector,value` with DD/MM/YYYY
//! dates and one row per (date, sector); the daily series is the sum over
//! sectors. Format B ("tidy"): `date,value` with ISO dates, one row per day.

use super::{DataError, TimeSeries};
use chrono::NaiveDate;
use std::collections::HashMap;
use std::io::Read;

/// The six sector names accepted in the carbon-monitor layout.
pub const CARBON_MONITOR_SECTORS: [&str; 6] = [
    "Power",
    "Industry",
    "Ground Transport",
    "Residential",
    "Domestic Aviation",
    "International Aviation",
];

/// Reads a carbon-monitor export and returns the per-day sector sums.
///
/// Every date present must carry each sector at most once; an unrecognized
/// sector name or a missing calendar day inside the covered range is an
/// error rather than a silent gap.
pub fn ingest_carbon_monitor<R: Read>(reader: R) -> Result<TimeSeries, DataError> {
    let mut csv_reader = csv::Reader::from_reader(reader);
    let mut totals: HashMap<NaiveDate, f64> = HashMap::new();
    let mut seen: HashMap<(NaiveDate, usize), ()> = HashMap::new();

    for (idx, record) in csv_reader.records().enumerate() {
        let row = idx + 2; // 1-based, after the header line
        let record = record.map_err(|e| DataError::Parse { row, message: e.to_string() })?;
        if record.len() != 4 {
            return Err(DataError::Parse {
                row,
                message: format!("expected 4 columns, found {}", record.len()),
            });
        }
        let date = parse_dmy(record.get(1).unwrap_or(""), row)?;
        let sector_name = record.get(2).unwrap_or("").trim();
        let sector = CARBON_MONITOR_SECTORS
            .iter()
            .position(|s| *s == sector_name)
            .ok_or_else(|| DataError::UnknownSector { row, name: sector_name.to_string() })?;
        let value = parse_value(record.get(3).unwrap_or(""), row)?;

        if seen.insert((date, sector), ()).is_some() {
            return Err(DataError::DuplicateEntry {
                row,
                date: date.format("%d/%m/%Y").to_string(),
                sector: sector_name.to_string(),
            });
        }
        *totals.entry(date).or_insert(0.0) += value;
    }

    collect_daily(totals)
}

/// Reads the tidy `date,value` layout (ISO dates, one row per day).
pub fn ingest_tidy<R: Read>(reader: R) -> Result<TimeSeries, DataError> {
    let mut csv_reader = csv::Reader::from_reader(reader);
    let mut totals: HashMap<NaiveDate, f64> = HashMap::new();

    for (idx, record) in csv_reader.records().enumerate() {
        let row = idx + 2;
        let record = record.map_err(|e| DataError::Parse { row, message: e.to_string() })?;
        if record.len() != 2 {
            return Err(DataError::Parse {
                row,
                message: format!("expected 2 columns, found {}", record.len()),
            });
        }
        let date_text = record.get(0).unwrap_or("").trim();
        let date: NaiveDate = date_text.parse().map_err(|_| DataError::Parse {
            row,
            message: format!("bad ISO date {date_text:?}"),
        })?;
        let value = parse_value(record.get(1).unwrap_or(""), row)?;
        if totals.insert(date, value).is_some() {
            return Err(DataError::DuplicateEntry {
                row,
                date: date.to_string(),
                sector: String::new(),
            });
        }
    }

    collect_daily(totals)
}

fn parse_dmy(text: &str, row: usize) -> Result<NaiveDate, DataError> {
    NaiveDate::parse_from_str(text.trim(), "%d/%m/%Y").map_err(|_| DataError::Parse {
        row,
        message: format!("bad DD/MM/YYYY date {:?}", text.trim()),
    })
}

fn parse_value(text: &str, row: usize) -> Result<f64, DataError> {
    let value: f64 = text.trim().parse().map_err(|_| DataError::Parse {
        row,
        message: format!("bad number {:?}", text.trim()),
    })?;
    if !value.is_finite() {
        return Err(DataError::Parse { row, message: format!("non-finite value {value}") });
    }
    Ok(value)
}

fn collect_daily(totals: HashMap<NaiveDate, f64>) -> Result<TimeSeries, DataError> {
    if totals.is_empty() {
        return Err(DataError::EmptySeries);
    }
    let mut dates: Vec<NaiveDate> = totals.keys().copied().collect();
    dates.sort_unstable();
    let values = dates.iter().map(|d| totals[d]).collect();
    TimeSeries::new(dates, values)
}
