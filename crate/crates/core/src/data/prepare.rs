//! Normalization, sliding-window supervision and the chronological split.

use super::{DataError, TimeSeries};
use serde::{Deserialize, Serialize};
use std::ops::Range;

/// Min-max scaler fitted on the training range only.
///
/// Maps `train_min → 0` and `train_max → 1`. Out-of-range inputs pass
/// through the same affine map without clipping, so test-set values may
/// land outside `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Normalizer {
    pub train_min: f64,
    pub train_max: f64,
}

impl Normalizer {
    /// Fits the scaler on a slice of training values.
    pub fn fit(train_values: &[f64]) -> Result<Self, DataError> {
        if train_values.is_empty() {
            return Err(DataError::EmptySeries);
        }
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for &v in train_values {
            min = min.min(v);
            max = max.max(v);
        }
        if max <= min {
            return Err(DataError::ConstantTrainRange { value: min });
        }
        Ok(Normalizer { train_min: min, train_max: max })
    }

    #[inline]
    pub fn normalize(&self, value: f64) -> f64 {
        (value - self.train_min) / (self.train_max - self.train_min)
    }

    #[inline]
    pub fn denormalize(&self, value: f64) -> f64 {
        value * (self.train_max - self.train_min) + self.train_min
    }

    pub fn normalize_all(&self, values: &[f64]) -> Vec<f64> {
        values.iter().map(|&v| self.normalize(v)).collect()
    }

    pub fn denormalize_all(&self, values: &[f64]) -> Vec<f64> {
        values.iter().map(|&v| self.denormalize(v)).collect()
    }
}

/// Contiguous, chronological, non-overlapping sample index ranges.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitRanges {
    pub train: Range<usize>,
    pub validation: Range<usize>,
    pub test: Range<usize>,
}

/// A series prepared for supervised one-step-ahead learning.
///
/// Sample `i` has input = normalized values at positions
/// `i .. i+window_length` and target = the value at `i+window_length`.
/// Windows borrow directly from the stored normalized series, so no
/// sample matrix is materialized.
#[derive(Debug, Clone)]
pub struct PreparedData {
    normalizer: Normalizer,
    normalized: Vec<f64>,
    raw: TimeSeries,
    window_length: usize,
    split: SplitRanges,
}

impl PreparedData {
    pub fn normalizer(&self) -> &Normalizer {
        &self.normalizer
    }

    /// The full series on the normalized scale.
    pub fn normalized(&self) -> &[f64] {
        &self.normalized
    }

    pub fn raw(&self) -> &TimeSeries {
        &self.raw
    }

    pub fn window_length(&self) -> usize {
        self.window_length
    }

    pub fn split(&self) -> &SplitRanges {
        &self.split
    }

    /// Number of supervised samples (`series length − window_length`).
    pub fn num_samples(&self) -> usize {
        self.normalized.len() - self.window_length
    }

    /// Input window of sample `i`, on the normalized scale.
    pub fn window(&self, i: usize) -> &[f64] {
        &self.normalized[i..i + self.window_length]
    }

    /// Target of sample `i`, on the normalized scale.
    pub fn target(&self, i: usize) -> f64 {
        self.normalized[i + self.window_length]
    }

    /// Raw-series position of sample `i`'s target.
    pub fn target_position(&self, i: usize) -> usize {
        i + self.window_length
    }

    /// Windows and targets for a sample range, as parallel vectors.
    pub fn range_samples(&self, range: &Range<usize>) -> (Vec<&[f64]>, Vec<f64>) {
        let windows = range.clone().map(|i| self.window(i)).collect();
        let targets = range.clone().map(|i| self.target(i)).collect();
        (windows, targets)
    }

    /// Raw (physical-scale) values underlying the training samples:
    /// positions `0 .. train_len − 1 + window_length`, inclusive.
    pub fn train_raw_values(&self) -> &[f64] {
        let end = self.split.train.end - 1 + self.window_length + 1;
        &self.raw.values()[..end]
    }

    /// Raw values strictly before the first test target, the information
    /// set available to a fixed-origin statistical forecaster.
    pub fn pre_test_raw_values(&self) -> &[f64] {
        let origin = self.target_position(self.split.test.start);
        &self.raw.values()[..origin]
    }

    /// Raw values strictly before the first validation target.
    pub fn pre_validation_raw_values(&self) -> &[f64] {
        let origin = self.target_position(self.split.validation.start);
        &self.raw.values()[..origin]
    }
}

/// Windows a series, fits the normalizer on the raw values underlying the
/// training sample range, and splits samples chronologically.
///
/// `|train| = floor(r_train · N)`, `|validation| = floor(r_val · N)` and
/// the test split takes the remainder, where `N = len − window_length`.
pub fn window_and_split(
    series: &TimeSeries,
    window_length: usize,
    ratios: (f64, f64, f64),
) -> Result<PreparedData, DataError> {
    let (r_train, r_val, r_test) = ratios;
    let sum = r_train + r_val + r_test;
    if !(r_train > 0.0 && r_val >= 0.0 && r_test >= 0.0) || (sum - 1.0).abs() > 1e-9 {
        return Err(DataError::BadSplitRatios { ratios });
    }
    if series.len() <= window_length + 2 {
        return Err(DataError::SeriesTooShort { len: series.len(), min: window_length + 3 });
    }

    let num_samples = series.len() - window_length;
    let n_train = (r_train * num_samples as f64).floor() as usize;
    let n_val = (r_val * num_samples as f64).floor() as usize;
    if n_train == 0 || n_train + n_val >= num_samples {
        return Err(DataError::SeriesTooShort { len: series.len(), min: window_length + 3 });
    }
    let split = SplitRanges {
        train: 0..n_train,
        validation: n_train..n_train + n_val,
        test: n_train + n_val..num_samples,
    };

    // the training samples touch raw positions 0 ..= n_train-1+window_length
    let train_raw_end = n_train - 1 + window_length + 1;
    let normalizer = Normalizer::fit(&series.values()[..train_raw_end])?;
    let normalized = normalizer.normalize_all(series.values());

    Ok(PreparedData {
        normalizer,
        normalized,
        raw: series.clone(),
        window_length,
        split,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::NaiveDate;

    fn series(values: &[f64]) -> TimeSeries {
        let start = NaiveDate::from_ymd_opt(2020, 1, 1).unwrap();
        TimeSeries::from_start_date(start, values.to_vec()).unwrap()
    }

    #[test]
    fn normalizer_maps_train_extremes() {
        let n = Normalizer::fit(&[20.0, 30.0, 40.0]).unwrap();
        assert_eq!(n.normalize(20.0), 0.0);
        assert_eq!(n.normalize(40.0), 1.0);
        assert_eq!(n.normalize(30.0), 0.5);
    }

    #[test]
    fn out_of_range_passes_through() {
        let n = Normalizer::fit(&[20.0, 40.0]).unwrap();
        assert_eq!(n.normalize(45.0), 1.25);
    }

    #[test]
    fn round_trip_identity() {
        let n = Normalizer::fit(&[20.0, 40.0]).unwrap();
        let x = 33.7;
        assert!((n.denormalize(n.normalize(x)) - x).abs() / x < 1e-12);
    }

    #[test]
    fn constant_range_errors() {
        assert!(matches!(
            Normalizer::fit(&[5.0, 5.0, 5.0]),
            Err(DataError::ConstantTrainRange { .. })
        ));
    }

    #[test]
    fn windows_slide_over_series() {
        let s = series(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let prepared = window_and_split(&s, 3, (0.8, 0.1, 0.1)).unwrap();
        assert_eq!(prepared.num_samples(), 3);
        // normalized scale: values are affine images of 1..6
        let w0: Vec<f64> = prepared.window(0).to_vec();
        let n = prepared.normalizer();
        assert_eq!(w0, vec![n.normalize(1.0), n.normalize(2.0), n.normalize(3.0)]);
        assert_eq!(prepared.target(0), n.normalize(4.0));
    }

    #[test]
    fn split_sizes_follow_floor_rule() {
        let values: Vec<f64> = (0..1004).map(|i| 20.0 + (i % 17) as f64).collect();
        let prepared = window_and_split(&series(&values), 3, (0.8, 0.1, 0.1)).unwrap();
        assert_eq!(prepared.num_samples(), 1001);
        let split = prepared.split();
        assert_eq!(split.train.len(), 800);
        assert_eq!(split.validation.len(), 100);
        assert_eq!(split.test.len(), 101);
        assert_eq!(split.train.end, split.validation.start);
        assert_eq!(split.validation.end, split.test.start);
        assert_eq!(split.test.end, prepared.num_samples());
    }

    #[test]
    fn bad_ratios_error() {
        let s = series(&(0..50).map(|i| i as f64).collect::<Vec<_>>());
        assert!(matches!(
            window_and_split(&s, 3, (0.8, 0.3, 0.1)),
            Err(DataError::BadSplitRatios { .. })
        ));
    }

    #[test]
    fn too_short_series_errors() {
        let s = series(&[1.0, 2.0, 3.0, 4.0]);
        assert!(matches!(
            window_and_split(&s, 3, (0.8, 0.1, 0.1)),
            Err(DataError::SeriesTooShort { .. })
        ));
    }

    #[test]
    fn normalizer_sees_only_training_raw_values() {
        // a large value in the test tail must not touch the scaler
        let mut values: Vec<f64> = (0..40).map(|i| 10.0 + i as f64 * 0.1).collect();
        values.push(1000.0);
        let prepared = window_and_split(&series(&values), 3, (0.8, 0.1, 0.1)).unwrap();
        assert!(prepared.normalizer().train_max < 20.0);
        let train_raw = prepared.train_raw_values();
        assert_eq!(train_raw.len(), prepared.split().train.len() - 1 + 3 + 1);
    }
}
