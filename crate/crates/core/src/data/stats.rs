//! Descriptive statistics of a series.

use super::{DataError, TimeSeries};
use serde::{Deserialize, Serialize};

/// The ten summary statistics reported for a series.
///
/// Skewness is the bias-corrected Fisher moment coefficient
/// `g1 * sqrt(n(n-1)) / (n-2)` and kurtosis is bias-corrected *excess*
/// kurtosis, the defaults of mainstream statistics tooling. The standard
/// deviation uses the n−1 denominator and the standard error is
/// `std / sqrt(n)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DescriptiveStats {
    pub count: usize,
    pub maximum: f64,
    pub minimum: f64,
    pub mean: f64,
    pub median: f64,
    pub range: f64,
    pub skewness: f64,
    pub kurtosis: f64,
    pub standard_deviation: f64,
    pub standard_error: f64,
    pub total: f64,
}

/// Computes [`DescriptiveStats`] for a series of at least two points.
pub fn describe(series: &TimeSeries) -> Result<DescriptiveStats, DataError> {
    let values = series.values();
    let n = values.len();
    if n < 2 {
        return Err(DataError::SeriesTooShort { len: n, min: 2 });
    }
    let nf = n as f64;

    let total: f64 = values.iter().sum();
    let mean = total / nf;

    let mut m2 = 0.0;
    let mut m3 = 0.0;
    let mut m4 = 0.0;
    for &v in values {
        let d = v - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= nf;
    m3 /= nf;
    m4 /= nf;

    let variance = m2 * nf / (nf - 1.0);
    let standard_deviation = variance.sqrt();

    // bias-corrected moment estimators; m2 > 0 is guaranteed unless the
    // series is exactly constant, in which case both are defined as 0
    let (skewness, kurtosis) = if m2 > 0.0 {
        let g1 = m3 / m2.powf(1.5);
        let skew = g1 * (nf * (nf - 1.0)).sqrt() / (nf - 2.0);
        let g2 = m4 / (m2 * m2) - 3.0;
        let kurt = ((nf + 1.0) * g2 + 6.0) * (nf - 1.0) / ((nf - 2.0) * (nf - 3.0));
        (skew, kurt)
    } else {
        (0.0, 0.0)
    };

    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("values validated finite"));
    let median = if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    };
    let minimum = sorted[0];
    let maximum = sorted[n - 1];

    Ok(DescriptiveStats {
        count: n,
        maximum,
        minimum,
        mean,
        median,
        range: maximum - minimum,
        skewness,
        kurtosis,
        standard_deviation,
        standard_error: standard_deviation / nf.sqrt(),
        total,
    })
}
