//! CSS estimation and forecasting for ARIMA/SARIMAX.
//!
//! Sign conventions: the AR polynomial is `1 − Σ φ_i B^i` (an AR(1) with
//! φ = 0.7 means `y_t = 0.7·y_{t−1} + ε_t`) and the MA polynomial is
//! `1 + Σ θ_j B^j` (an MA(1) with θ = 0.5 means `y_t = ε_t + 0.5·ε_{t−1}`).
//! Seasonal polynomials multiply the non-seasonal ones; products are
//! expanded into full-lag coefficient arrays before the recursion runs.

use super::neldermead;
use super::BoxJenkinsError;

/// Non-seasonal (p,d,q) and seasonal (P,D,Q)_s order specification.
/// `season_length = 0` means no seasonal structure at all.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ArimaOrder {
    pub p: usize,
    pub d: usize,
    pub q: usize,
    pub seasonal_p: usize,
    pub seasonal_d: usize,
    pub seasonal_q: usize,
    pub season_length: usize,
}

impl ArimaOrder {
    pub fn new(p: usize, d: usize, q: usize) -> Self {
        ArimaOrder { p, d, q, seasonal_p: 0, seasonal_d: 0, seasonal_q: 0, season_length: 0 }
    }

    pub fn with_seasonal(mut self, sp: usize, sd: usize, sq: usize, s: usize) -> Self {
        self.seasonal_p = sp;
        self.seasonal_d = sd;
        self.seasonal_q = sq;
        self.season_length = s;
        self
    }

    pub fn validate(&self) -> Result<(), BoxJenkinsError> {
        if self.season_length == 0
            && (self.seasonal_p > 0 || self.seasonal_d > 0 || self.seasonal_q > 0)
        {
            return Err(BoxJenkinsError::InvalidOrder {
                message: "seasonal orders require a positive season length".into(),
            });
        }
        Ok(())
    }

    /// True when an intercept is estimated (no differencing of any kind).
    pub fn has_intercept(&self) -> bool {
        self.d + self.seasonal_d == 0
    }

    pub(crate) fn consumed_by_differencing(&self) -> usize {
        self.d + self.seasonal_d * self.season_length
    }

    pub fn label(&self) -> String {
        if self.season_length == 0 {
            format!("({},{},{})", self.p, self.d, self.q)
        } else {
            format!(
                "({},{},{})({},{},{})_{}",
                self.p, self.d, self.q, self.seasonal_p, self.seasonal_d, self.seasonal_q,
                self.season_length
            )
        }
    }
}

/// A fitted ARIMA/SARIMAX model, carrying the differenced-series and
/// residual tails needed to forecast from the end of the training data.
#[derive(Debug, Clone, PartialEq)]
pub struct ArimaModel {
    pub order: ArimaOrder,
    pub ar: Vec<f64>,
    pub ma: Vec<f64>,
    pub seasonal_ar: Vec<f64>,
    pub seasonal_ma: Vec<f64>,
    pub exog_coeffs: Vec<f64>,
    pub intercept: f64,
    pub residual_variance: f64,
    /// Set when the fitted AR polynomial is non-stationary or the MA
    /// polynomial non-invertible; a flag, not an error.
    pub stability_warning: Option<String>,
    /// In-sample one-step residuals (empty for checkpoint-loaded models).
    pub residuals: Vec<f64>,
    /// Best CSS value per optimizer iteration (non-increasing).
    pub css_trace: Vec<f64>,
    /// Mean of the differenced series, used for pre-sample padding.
    pub presample_mean: f64,
    /// Last `max AR lag` differenced values.
    pub diff_tail: Vec<f64>,
    /// Last `max MA lag` residuals.
    pub resid_tail: Vec<f64>,
    /// Per differencing stage (application order): lag and the last `lag`
    /// values of that stage's input series.
    pub stage_tails: Vec<(usize, Vec<f64>)>,
}

/// Expands `base(B) · seasonal(B^s)` into one coefficient array indexed by
/// lag, where both polynomials are `1 ∓ Σ c_i B^...` and `sign` is −1 for
/// the AR convention and +1 for the MA convention.
fn expand_poly(base: &[f64], seasonal: &[f64], season_length: usize, sign: f64) -> Vec<f64> {
    let max_lag = base.len() + seasonal.len() * season_length;
    let mut full = vec![0.0; max_lag];
    for (i, &c) in base.iter().enumerate() {
        full[i] += c;
    }
    for (j, &sc) in seasonal.iter().enumerate() {
        let lag_s = (j + 1) * season_length;
        full[lag_s - 1] += sc;
        for (i, &c) in base.iter().enumerate() {
            full[lag_s + i] += sign * c * sc;
        }
    }
    full
}

/// Schur-Cohn recursion: true iff all roots of `1 + Σ coeffs[i]·z^(i+1)`
/// lie strictly outside the unit circle.
fn roots_outside_unit_circle(coeffs: &[f64]) -> bool {
    let mut a: Vec<f64> = std::iter::once(1.0).chain(coeffs.iter().copied()).collect();
    while a.len() > 1 {
        let m = a.len() - 1;
        let k = a[m] / a[0];
        if !k.is_finite() || k.abs() >= 1.0 {
            return false;
        }
        let next: Vec<f64> = (0..m).map(|i| a[i] - k * a[m - i]).collect();
        a = next;
    }
    true
}

struct Recursion<'a> {
    u: &'a [f64],
    ar_full: Vec<f64>,
    ma_full: Vec<f64>,
    intercept: f64,
    exog_effect: Vec<f64>,
    presample_mean: f64,
}

impl Recursion<'_> {
    /// One-step residuals and their sum of squares.
    fn residuals(&self) -> (Vec<f64>, f64) {
        let n = self.u.len();
        let mut eps = Vec::with_capacity(n);
        let mut css = 0.0;
        for t in 0..n {
            let mut pred = self.intercept;
            if !self.exog_effect.is_empty() {
                pred += self.exog_effect[t];
            }
            for (i, &a) in self.ar_full.iter().enumerate() {
                let lag = i + 1;
                let past = if t >= lag { self.u[t - lag] } else { self.presample_mean };
                pred += a * past;
            }
            for (j, &b) in self.ma_full.iter().enumerate() {
                let lag = j + 1;
                if t >= lag {
                    pred += b * eps[t - lag];
                }
            }
            let e = self.u[t] - pred;
            eps.push(e);
            css += e * e;
        }
        (eps, css)
    }
}

const MAX_ITERATIONS: usize = 2000;
const OBJECTIVE_TOL: f64 = 1e-10;
const PARAM_TOL: f64 = 1e-8;

/// Fits the model by CSS on the differenced series, starting the optimizer
/// from a zero coefficient vector.
pub fn fit(
    values: &[f64],
    order: ArimaOrder,
    exog: Option<&[Vec<f64>]>,
) -> Result<ArimaModel, BoxJenkinsError> {
    order.validate()?;
    let exog_cols = exog.map(|m| m.first().map_or(0, Vec::len)).unwrap_or(0);
    if let Some(m) = exog {
        if m.len() != values.len() {
            return Err(BoxJenkinsError::ExogShape { rows: m.len(), expected: values.len() });
        }
        if m.iter().any(|row| row.len() != exog_cols) {
            return Err(BoxJenkinsError::ExogShape { rows: m.len(), expected: values.len() });
        }
    }

    // differencing stages, keeping per-stage tails for later forecasts
    let mut stage_tails = Vec::new();
    let mut current = values.to_vec();
    let mut stage_lags = vec![order.season_length; order.seasonal_d];
    stage_lags.extend(std::iter::repeat_n(1, order.d));
    for &lag in &stage_lags {
        if current.len() <= lag {
            return Err(BoxJenkinsError::TooShort {
                len: values.len(),
                min: order.consumed_by_differencing() + 1,
            });
        }
        stage_tails.push((lag, current[current.len() - lag..].to_vec()));
        current = (lag..current.len()).map(|i| current[i] - current[i - lag]).collect();
    }
    let u = current;

    let n_coeffs = order.p + order.q + order.seasonal_p + order.seasonal_q;
    let min_len = 10 + n_coeffs + exog_cols;
    if u.len() <= min_len {
        return Err(BoxJenkinsError::TooShort {
            len: values.len(),
            min: min_len + 1 + order.consumed_by_differencing(),
        });
    }

    let presample_mean = u.iter().sum::<f64>() / u.len() as f64;
    let offset = order.consumed_by_differencing();
    let has_intercept = order.has_intercept();
    let n_params = usize::from(has_intercept) + n_coeffs + exog_cols;

    type Coefficients = (f64, Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>);
    let unpack = |params: &[f64]| -> Coefficients {
        let mut idx = 0;
        let intercept = if has_intercept {
            idx += 1;
            params[0]
        } else {
            0.0
        };
        let take = |idx: &mut usize, n: usize| -> Vec<f64> {
            let out = params[*idx..*idx + n].to_vec();
            *idx += n;
            out
        };
        let ar = take(&mut idx, order.p);
        let ma = take(&mut idx, order.q);
        let sar = take(&mut idx, order.seasonal_p);
        let sma = take(&mut idx, order.seasonal_q);
        let zeta = take(&mut idx, exog_cols);
        (intercept, ar, ma, sar, sma, zeta)
    };

    let recursion_for = |params: &[f64]| {
        let (intercept, ar, ma, sar, sma, zeta) = unpack(params);
        let exog_effect = if exog_cols > 0 {
            let m = exog.expect("validated above");
            (0..u.len())
                .map(|t| zeta.iter().zip(&m[offset + t]).map(|(z, x)| z * x).sum())
                .collect()
        } else {
            Vec::new()
        };
        Recursion {
            u: &u,
            ar_full: expand_poly(&ar, &sar, order.season_length, -1.0),
            ma_full: expand_poly(&ma, &sma, order.season_length, 1.0),
            intercept,
            exog_effect,
            presample_mean,
        }
    };

    let (params, css_trace) = if n_params == 0 {
        let (_, css) = recursion_for(&[]).residuals();
        (Vec::new(), vec![css])
    } else if n_params == 1 && has_intercept {
        // CSS = Σ (u_t − c)², minimized exactly at the mean
        let c = presample_mean;
        let (_, css) = recursion_for(&[c]).residuals();
        (vec![c], vec![css])
    } else {
        let outcome = neldermead::minimize(
            |p| recursion_for(p).residuals().1,
            &vec![0.0; n_params],
            0.1,
            OBJECTIVE_TOL,
            PARAM_TOL,
            MAX_ITERATIONS,
        );
        if !outcome.converged {
            return Err(BoxJenkinsError::NonConvergence {
                iterations: outcome.iterations,
                last_objective: outcome.best_objective,
            });
        }
        (outcome.best, outcome.trace)
    };

    let recursion = recursion_for(&params);
    let (residuals, css) = recursion.residuals();
    let (intercept, ar, ma, sar, sma, zeta) = unpack(&params);

    let mut warnings = Vec::new();
    if !recursion.ar_full.is_empty() {
        let neg: Vec<f64> = recursion.ar_full.iter().map(|c| -c).collect();
        if !roots_outside_unit_circle(&neg) {
            warnings.push("non-stationary AR polynomial");
        }
    }
    if !recursion.ma_full.is_empty() && !roots_outside_unit_circle(&recursion.ma_full) {
        warnings.push("non-invertible MA polynomial");
    }

    let ar_len = recursion.ar_full.len();
    let ma_len = recursion.ma_full.len();
    let diff_tail = u[u.len().saturating_sub(ar_len)..].to_vec();
    let resid_tail = residuals[residuals.len().saturating_sub(ma_len)..].to_vec();

    Ok(ArimaModel {
        order,
        ar,
        ma,
        seasonal_ar: sar,
        seasonal_ma: sma,
        exog_coeffs: zeta,
        intercept,
        residual_variance: css / u.len() as f64,
        stability_warning: if warnings.is_empty() { None } else { Some(warnings.join("; ")) },
        residuals,
        css_trace,
        presample_mean,
        diff_tail,
        resid_tail,
        stage_tails,
    })
}

/// One-step-ahead predictions over an extended series using the fitted
/// coefficients (no refitting): the rolling evaluation mode. Returns
/// predictions aligned with `values[offset..]`, where `offset` is the
/// number of observations consumed by differencing. The one-step
/// prediction of `y_t` equals `y_t − ε_t` because differencing is linear.
pub fn one_step_predictions(
    model: &ArimaModel,
    values: &[f64],
    exog: Option<&[Vec<f64>]>,
) -> Result<Vec<f64>, BoxJenkinsError> {
    let order = model.order;
    let offset = order.consumed_by_differencing();
    if values.len() <= offset {
        return Err(BoxJenkinsError::TooShort { len: values.len(), min: offset + 1 });
    }
    if !model.exog_coeffs.is_empty() {
        let m = exog.ok_or(BoxJenkinsError::MissingFutureExog)?;
        if m.len() != values.len() {
            return Err(BoxJenkinsError::ExogShape { rows: m.len(), expected: values.len() });
        }
    }

    let mut current = values.to_vec();
    let mut lags = vec![order.season_length; order.seasonal_d];
    lags.extend(std::iter::repeat_n(1, order.d));
    for &lag in &lags {
        current = (lag..current.len()).map(|i| current[i] - current[i - lag]).collect();
    }
    let u = current;

    let exog_effect: Vec<f64> = if model.exog_coeffs.is_empty() {
        Vec::new()
    } else {
        let m = exog.expect("checked above");
        (0..u.len())
            .map(|t| model.exog_coeffs.iter().zip(&m[offset + t]).map(|(z, x)| z * x).sum())
            .collect()
    };
    let recursion = Recursion {
        u: &u,
        ar_full: expand_poly(&model.ar, &model.seasonal_ar, order.season_length, -1.0),
        ma_full: expand_poly(&model.ma, &model.seasonal_ma, order.season_length, 1.0),
        intercept: model.intercept,
        exog_effect,
        presample_mean: model.presample_mean,
    };
    let (residuals, _) = recursion.residuals();
    Ok(values[offset..].iter().zip(&residuals).map(|(y, e)| y - e).collect())
}

/// Deterministic fixed-origin forecast: iterates the ARMA recursion with
/// future shocks at zero, then inverts the differencing stage by stage.
pub fn forecast(
    model: &ArimaModel,
    horizon: usize,
    future_exog: Option<&[Vec<f64>]>,
) -> Result<Vec<f64>, BoxJenkinsError> {
    if !model.exog_coeffs.is_empty() {
        let m = future_exog.ok_or(BoxJenkinsError::MissingFutureExog)?;
        if m.len() != horizon {
            return Err(BoxJenkinsError::ExogShape { rows: m.len(), expected: horizon });
        }
    }

    let ar_full = expand_poly(&model.ar, &model.seasonal_ar, model.order.season_length, -1.0);
    let ma_full = expand_poly(&model.ma, &model.seasonal_ma, model.order.season_length, 1.0);

    let mut u_hist = model.diff_tail.clone();
    let mut eps_hist = model.resid_tail.clone();
    let mut diffed_forecasts = Vec::with_capacity(horizon);
    for h in 0..horizon {
        let mut pred = model.intercept;
        if !model.exog_coeffs.is_empty() {
            let row = &future_exog.expect("checked above")[h];
            pred += model.exog_coeffs.iter().zip(row).map(|(z, x)| z * x).sum::<f64>();
        }
        for (i, &a) in ar_full.iter().enumerate() {
            let lag = i + 1;
            let past = if lag <= u_hist.len() {
                u_hist[u_hist.len() - lag]
            } else {
                model.presample_mean
            };
            pred += a * past;
        }
        for (j, &b) in ma_full.iter().enumerate() {
            let lag = j + 1;
            if lag <= eps_hist.len() {
                pred += b * eps_hist[eps_hist.len() - lag];
            }
        }
        u_hist.push(pred);
        eps_hist.push(0.0); // future shocks at their zero mean
        diffed_forecasts.push(pred);
    }

    // invert differencing: walk stages from the deepest back to the raw scale
    let mut level = diffed_forecasts;
    for (lag, tail) in model.stage_tails.iter().rev() {
        let mut fifo: std::collections::VecDeque<f64> = tail.iter().copied().collect();
        debug_assert_eq!(fifo.len(), *lag);
        let mut restored = Vec::with_capacity(level.len());
        for &v in &level {
            let base = fifo.pop_front().expect("stage tail length equals lag");
            let value = v + base;
            fifo.push_back(value);
            restored.push(value);
        }
        level = restored;
    }
    Ok(level)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wobble(n: usize) -> Vec<f64> {
        // deterministic, aperiodic, finite test series
        (0..n).map(|t| 5.0 + (t as f64 * 0.37).sin() + (t as f64 * 0.11).cos() * 0.4).collect()
    }

    fn noisy(n: usize, seed: u64) -> Vec<f64> {
        // LCG-driven pseudo-noise keeps the CSS surface well conditioned
        let mut state = seed;
        let mut uniform = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        (0..n).map(|t| 5.0 + (t as f64 * 0.37).sin() * 0.5 + uniform()).collect()
    }

    #[test]
    fn expand_poly_cross_terms() {
        // (1 - 0.5 B)(1 - 0.3 B^4) = 1 - 0.5B - 0.3B^4 + 0.15B^5
        let full = expand_poly(&[0.5], &[0.3], 4, -1.0);
        assert_eq!(full.len(), 5);
        assert_eq!(full[0], 0.5);
        assert_eq!(full[3], 0.3);
        assert!((full[4] - (-0.15)).abs() < 1e-15);

        // (1 + 0.5 B)(1 + 0.3 B^4) = 1 + 0.5B + 0.3B^4 + 0.15B^5
        let full = expand_poly(&[0.5], &[0.3], 4, 1.0);
        assert!((full[4] - 0.15).abs() < 1e-15);
    }

    #[test]
    fn schur_cohn_matches_known_roots() {
        // AR(1): stationary iff |phi| < 1; polynomial is 1 - phi z
        assert!(roots_outside_unit_circle(&[-0.5]));
        assert!(!roots_outside_unit_circle(&[-1.1]));
        assert!(!roots_outside_unit_circle(&[-1.0])); // unit root
        // 1 - 0.5z - 0.3z^2 has roots 1.1736.., -2.84.. (both outside)
        assert!(roots_outside_unit_circle(&[-0.5, -0.3]));
        // 1 - 1.2z + 0.2z^2 has a root at z = 1
        assert!(!roots_outside_unit_circle(&[-1.2, 0.2]));
    }

    #[test]
    fn white_noise_intercept_is_the_mean() {
        let y = wobble(200);
        let mean = y.iter().sum::<f64>() / y.len() as f64;
        let model = fit(&y, ArimaOrder::new(0, 0, 0), None).unwrap();
        assert!((model.intercept - mean).abs() < 1e-9);
        assert!(model.residual_variance > 0.0);
    }

    #[test]
    fn random_walk_order_forecasts_last_value() {
        let y = wobble(60);
        let model = fit(&y, ArimaOrder::new(0, 1, 0), None).unwrap();
        let f = forecast(&model, 5, None).unwrap();
        for v in f {
            assert_eq!(v, *y.last().unwrap());
        }
    }

    #[test]
    fn intercept_only_forecasts_mean() {
        let y = wobble(100);
        let model = fit(&y, ArimaOrder::new(0, 0, 0), None).unwrap();
        let f = forecast(&model, 4, None).unwrap();
        for v in f {
            assert!((v - model.intercept).abs() < 1e-12);
        }
    }

    #[test]
    fn ma_memory_exhausts_after_q_steps() {
        let y = noisy(300, 99);
        let model = fit(&y, ArimaOrder::new(0, 0, 3), None).unwrap();
        let f = forecast(&model, 8, None).unwrap();
        for (h, v) in f.iter().enumerate().skip(3) {
            assert!((v - model.intercept).abs() < 1e-12, "h={h}: {v} vs {}", model.intercept);
        }
        // the first steps do use the stored residual tail
        assert!((f[0] - model.intercept).abs() > 1e-9);
    }

    #[test]
    fn sarimax_null_config_is_bit_identical_to_arima() {
        let y = noisy(120, 3);
        let plain = fit(&y, ArimaOrder::new(1, 1, 1), None).unwrap();
        let null_seasonal = fit(&y, ArimaOrder::new(1, 1, 1).with_seasonal(0, 0, 0, 0), None).unwrap();
        assert_eq!(plain, null_seasonal);
        let f1 = forecast(&plain, 7, None).unwrap();
        let f2 = forecast(&null_seasonal, 7, None).unwrap();
        assert_eq!(f1, f2);
    }

    #[test]
    fn forecasts_are_deterministic() {
        let y = noisy(150, 11);
        let model = fit(&y, ArimaOrder::new(2, 1, 1), None).unwrap();
        assert_eq!(forecast(&model, 10, None).unwrap(), forecast(&model, 10, None).unwrap());
    }

    #[test]
    fn css_trace_is_monotone() {
        let y = noisy(150, 17);
        let model = fit(&y, ArimaOrder::new(1, 0, 1), None).unwrap();
        for w in model.css_trace.windows(2) {
            assert!(w[1] <= w[0] + 1e-12);
        }
    }

    #[test]
    fn explosive_fit_is_flagged_not_rejected() {
        // exponential growth drives the AR coefficient past one; the fit
        // succeeds and carries a warning
        let y: Vec<f64> = (0..60).map(|t| 1.05f64.powi(t)).collect();
        let model = fit(&y, ArimaOrder::new(1, 0, 0), None).unwrap();
        assert!(model.ar[0] > 1.0, "phi = {}", model.ar[0]);
        assert!(model.stability_warning.as_deref().unwrap_or("").contains("non-stationary"));
    }

    #[test]
    fn exog_requires_future_rows() {
        let y = noisy(80, 7);
        let exog: Vec<Vec<f64>> = (0..80).map(|t| vec![(t % 7) as f64]).collect();
        let model = fit(&y, ArimaOrder::new(0, 0, 1), Some(&exog)).unwrap();
        assert_eq!(model.exog_coeffs.len(), 1);
        assert!(matches!(forecast(&model, 3, None), Err(BoxJenkinsError::MissingFutureExog)));
        let future: Vec<Vec<f64>> = (0..3).map(|t| vec![(t % 7) as f64]).collect();
        assert_eq!(forecast(&model, 3, Some(&future)).unwrap().len(), 3);
    }

    #[test]
    fn invalid_seasonal_order_rejected() {
        let err = ArimaOrder::new(0, 0, 0).with_seasonal(1, 0, 0, 0).validate().unwrap_err();
        assert!(matches!(err, BoxJenkinsError::InvalidOrder { .. }));
    }

    #[test]
    fn seasonal_difference_forecast_extends_pattern() {
        // deterministic weekly sawtooth: D=1 at s=7 reduces it to zeros, so
        // the forecast must reproduce the sawtooth exactly
        let y: Vec<f64> = (0..70).map(|t| (t % 7) as f64 + 10.0).collect();
        let model = fit(&y, ArimaOrder::new(0, 0, 0).with_seasonal(0, 1, 0, 7), None).unwrap();
        let f = forecast(&model, 14, None).unwrap();
        for (h, v) in f.iter().enumerate() {
            let expected = ((70 + h) % 7) as f64 + 10.0;
            assert!((v - expected).abs() < 1e-9, "h={h}");
        }
    }
}
