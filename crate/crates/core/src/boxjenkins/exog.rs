//! Optional calendar regressors for SARIMAX.

use chrono::{Datelike, NaiveDate, Weekday};

/// Six day-of-week indicator columns (Tuesday..Sunday; Monday is the
/// dropped baseline), one row per date.
pub fn day_of_week_exog(dates: &[NaiveDate]) -> Vec<Vec<f64>> {
    dates
        .iter()
        .map(|d| {
            let mut row = vec![0.0; 6];
            let idx = match d.weekday() {
                Weekday::Mon => None,
                Weekday::Tue => Some(0),
                Weekday::Wed => Some(1),
                Weekday::Thu => Some(2),
                Weekday::Fri => Some(3),
                Weekday::Sat => Some(4),
                Weekday::Sun => Some(5),
            };
            if let Some(i) = idx {
                row[i] = 1.0;
            }
            row
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> NaiveDate {
        s.parse().unwrap()
    }

    #[test]
    fn monday_is_baseline() {
        // 2020-01-06 was a Monday
        let rows = day_of_week_exog(&[d("2020-01-06")]);
        assert_eq!(rows[0], vec![0.0; 6]);
    }

    #[test]
    fn tuesday_sets_first_column() {
        let rows = day_of_week_exog(&[d("2020-01-07")]);
        assert_eq!(rows[0], vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn full_week_covers_each_column_once() {
        let dates: Vec<NaiveDate> = (0..7).map(|i| d("2020-01-06") + chrono::Duration::days(i)).collect();
        let rows = day_of_week_exog(&dates);
        for col in 0..6 {
            let sum: f64 = rows.iter().map(|r| r[col]).sum();
            assert_eq!(sum, 1.0);
        }
    }
}
