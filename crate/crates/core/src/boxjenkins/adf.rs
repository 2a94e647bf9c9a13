//! Augmented Dickey-Fuller unit root test (constant, no trend).

use super::BoxJenkinsError;
use crate::linalg::{least_squares, Mat};

/// Large-sample 5% critical value for the constant-only Dickey-Fuller
/// distribution.
pub const ADF_CRITICAL_5PCT: f64 = -2.86;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdfOutcome {
    /// t-statistic on the lagged-level coefficient.
    pub statistic: f64,
    /// True when the unit-root null is rejected at the 5% level, i.e. the
    /// series looks stationary.
    pub reject_unit_root: bool,
    pub lags: usize,
    pub n_effective: usize,
}

/// Schwert's rule of thumb: `floor(12 · (n/100)^(1/4))`.
pub fn default_adf_lag(n: usize) -> usize {
    (12.0 * (n as f64 / 100.0).powf(0.25)).floor() as usize
}

/// Runs the ADF regression
/// `Δy_t = α + β·y_{t−1} + Σ γ_i Δy_{t−i} + ε_t`
/// with `max_lag` augmentation lags (default per [`default_adf_lag`]) and
/// compares the t-statistic on β against [`ADF_CRITICAL_5PCT`].
pub fn adf_test(values: &[f64], max_lag: Option<usize>) -> Result<AdfOutcome, BoxJenkinsError> {
    let n = values.len();
    if n < 20 {
        return Err(BoxJenkinsError::TooShort { len: n, min: 20 });
    }
    let lags = max_lag.unwrap_or_else(|| default_adf_lag(n));
    let k = lags + 2; // constant + level + lagged differences
    if n < lags + k + 3 {
        return Err(BoxJenkinsError::TooShort { len: n, min: lags + k + 3 });
    }

    let mut dy = vec![0.0; n];
    for t in 1..n {
        dy[t] = values[t] - values[t - 1];
    }

    let n_effective = n - 1 - lags;
    let mut design = Mat::zeros(n_effective, k);
    let mut response = Vec::with_capacity(n_effective);
    for (row, t) in (lags + 1..n).enumerate() {
        design.set(row, 0, 1.0);
        design.set(row, 1, values[t - 1]);
        for i in 1..=lags {
            design.set(row, 1 + i, dy[t - i]);
        }
        response.push(dy[t]);
    }

    let (coef, xtx_inv) =
        least_squares(&design, &response).ok_or(BoxJenkinsError::SingularRegression)?;

    let mut rss = 0.0;
    for (row, &y) in response.iter().enumerate() {
        let fitted: f64 = design.row(row).iter().zip(&coef).map(|(x, c)| x * c).sum();
        let e = y - fitted;
        rss += e * e;
    }
    let dof = n_effective.saturating_sub(k).max(1) as f64;
    let sigma2 = rss / dof;
    let var_beta = sigma2 * xtx_inv.get(1, 1);
    if var_beta <= 0.0 || !var_beta.is_finite() {
        return Err(BoxJenkinsError::SingularRegression);
    }
    let statistic = coef[1] / var_beta.sqrt();

    Ok(AdfOutcome {
        statistic,
        reject_unit_root: statistic < ADF_CRITICAL_5PCT,
        lags,
        n_effective,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_lag_formula() {
        assert_eq!(default_adf_lag(100), 12);
        assert_eq!(default_adf_lag(2000), 25);
        assert_eq!(default_adf_lag(1004), 21);
    }

    #[test]
    fn too_short_is_error() {
        let y: Vec<f64> = (0..10).map(|i| i as f64).collect();
        assert!(matches!(adf_test(&y, Some(1)), Err(BoxJenkinsError::TooShort { .. })));
    }

    #[test]
    fn deterministic_linear_trend_behavior() {
        // documented behavior, no pass/fail contract: a pure ramp makes
        // Δy constant, so any augmentation lag collides with the constant
        // column (singular design); with zero lags the regression runs
        let y: Vec<f64> = (0..200).map(|t| t as f64).collect();
        assert!(matches!(adf_test(&y, Some(2)), Err(BoxJenkinsError::SingularRegression)));
        let out = adf_test(&y, Some(0)).unwrap();
        assert!(out.statistic.is_finite());
    }

    #[test]
    fn obviously_stationary_series_rejects() {
        // deterministic mean-reverting AR(1) with LCG innovations
        let mut state: u64 = 12345;
        let mut noise = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let mut y = vec![0.0f64];
        for _ in 1..500 {
            let prev = *y.last().unwrap();
            y.push(0.5 * prev + noise());
        }
        let out = adf_test(&y, Some(1)).unwrap();
        assert!(out.reject_unit_root, "statistic = {}", out.statistic);
    }
}
