//! Ljung-Box residual whiteness test.

use super::BoxJenkinsError;

/// Chi-square 95th percentiles for 1..=40 degrees of freedom.
const CHI2_95: [f64; 40] = [
    3.841459, 5.991465, 7.814728, 9.487729, 11.070498,
    12.591587, 14.067140, 15.507313, 16.918978, 18.307038,
    19.675138, 21.026070, 22.362032, 23.684791, 24.995790,
    26.296228, 27.587112, 28.869299, 30.143527, 31.410433,
    32.670573, 33.924438, 35.172462, 36.415029, 37.652484,
    38.885139, 40.113272, 41.337138, 42.556968, 43.772972,
    44.985343, 46.194260, 47.399884, 48.602367, 49.801850,
    50.998460, 52.192320, 53.383541, 54.572228, 55.758479,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LjungBoxOutcome {
    pub statistic: f64,
    pub lags: usize,
    pub critical_5pct: f64,
    /// True when the statistic stays below the critical value, i.e. the
    /// residuals are consistent with white noise.
    pub passes: bool,
}

/// Computes the Ljung-Box Q statistic over `lags` autocorrelation lags and
/// compares it against the tabulated chi-square 5% threshold (df = lags,
/// tabulated up to 40).
pub fn ljung_box(residuals: &[f64], lags: usize) -> Result<LjungBoxOutcome, BoxJenkinsError> {
    let n = residuals.len();
    if lags == 0 || lags > 40 {
        return Err(BoxJenkinsError::InvalidOrder {
            message: format!("ljung-box lags must be in 1..=40, got {lags}"),
        });
    }
    if n <= lags {
        return Err(BoxJenkinsError::TooShort { len: n, min: lags + 1 });
    }
    for (index, &v) in residuals.iter().enumerate() {
        if !v.is_finite() {
            return Err(BoxJenkinsError::NonFinite { index });
        }
    }

    let nf = n as f64;
    let mean = residuals.iter().sum::<f64>() / nf;
    let denom: f64 = residuals.iter().map(|&r| (r - mean).powi(2)).sum();
    if denom <= 0.0 {
        return Err(BoxJenkinsError::SingularRegression);
    }

    let mut q = 0.0;
    for k in 1..=lags {
        let mut num = 0.0;
        for t in k..n {
            num += (residuals[t] - mean) * (residuals[t - k] - mean);
        }
        let r = num / denom;
        q += r * r / (nf - k as f64);
    }
    q *= nf * (nf + 2.0);

    let critical = CHI2_95[lags - 1];
    Ok(LjungBoxOutcome { statistic: q, lags, critical_5pct: critical, passes: q < critical })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_residuals_are_degenerate() {
        assert!(matches!(
            ljung_box(&[1.0; 50], 5),
            Err(BoxJenkinsError::SingularRegression)
        ));
    }

    #[test]
    fn strongly_autocorrelated_series_fails() {
        // slow sine: autocorrelation near 1 at small lags
        let y: Vec<f64> = (0..400).map(|t| (t as f64 * 0.05).sin()).collect();
        let out = ljung_box(&y, 10).unwrap();
        assert!(!out.passes, "Q = {}", out.statistic);
    }

    #[test]
    fn alternating_signs_fail_too() {
        // perfect negative lag-1 autocorrelation is not white noise
        let y: Vec<f64> = (0..200).map(|t| if t % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let out = ljung_box(&y, 5).unwrap();
        assert!(!out.passes);
    }

    #[test]
    fn lag_bounds_checked() {
        let y = vec![0.0; 100];
        assert!(ljung_box(&y, 0).is_err());
        assert!(ljung_box(&y, 41).is_err());
    }
}
