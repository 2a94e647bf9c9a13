//! Grey prediction model GM(1,1).
//!
//! The model accumulates the primitive series (running prefix sums), forms
//! the adjacent-mean sequence of the accumulated series, estimates the two
//! parameters by least squares, solves the whitening ODE, and recovers
//! primitive-scale forecasts by inverse accumulation (first differencing of
//! the accumulated response).
//!
//! Indexing convention: the adjacent-mean sequence is defined for j = 2..n
//! as `z_j = (x1_{j-1} + x1_j) / 2`, the standard grey-model convention.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GreyError {
    #[error("series too short: {len} observations, need at least {min}")]
    TooShort { len: usize, min: usize },

    #[error("non-positive value {value} at index {index}; grey models require strictly positive data")]
    NonPositive { index: usize, value: f64 },

    #[error("singular least-squares system (adjacent-mean sequence is constant)")]
    SingularFit,

    #[error("non-finite value {value} at index {index}")]
    NonFinite { index: usize, value: f64 },
}

/// Below this magnitude the development dynamics degenerate to the
/// analytic a→0 limit (constant forecasts equal to `b`).
const DEGENERATE_A: f64 = 1e-12;

/// A fitted GM(1,1) model.
///
/// `-a` is the development coefficient and `b` the grey action quantity;
/// `first_value` is the first primitive observation, which anchors the
/// whitening-equation solution as its initial condition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreyModel {
    pub a: f64,
    pub b: f64,
    pub first_value: f64,
    pub n_fit: usize,
}

/// First-order accumulated generating operation: running prefix sums.
pub fn accumulate(values: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    values
        .iter()
        .map(|&v| {
            acc += v;
            acc
        })
        .collect()
}

/// Adjacent means of an accumulated sequence; output j corresponds to
/// positions (j, j+1) of the input, so the result has length n−1.
pub fn adjacent_means(accumulated: &[f64]) -> Result<Vec<f64>, GreyError> {
    if accumulated.len() < 2 {
        return Err(GreyError::TooShort { len: accumulated.len(), min: 2 });
    }
    Ok(accumulated.windows(2).map(|w| (w[0] + w[1]) / 2.0).collect())
}

/// Fits GM(1,1) on a strictly positive series of length ≥ 4 via the
/// closed-form two-parameter normal equations.
pub fn fit(values: &[f64]) -> Result<GreyModel, GreyError> {
    if values.len() < 4 {
        return Err(GreyError::TooShort { len: values.len(), min: 4 });
    }
    for (index, &value) in values.iter().enumerate() {
        if !value.is_finite() {
            return Err(GreyError::NonFinite { index, value });
        }
        if value <= 0.0 {
            return Err(GreyError::NonPositive { index, value });
        }
    }

    let z = adjacent_means(&accumulate(values))?;
    let y = &values[1..];
    let m = z.len() as f64;

    // OLS of y on (-z, 1): y_j = -a z_j + b
    let s_z: f64 = z.iter().sum();
    let s_zz: f64 = z.iter().map(|v| v * v).sum();
    let s_y: f64 = y.iter().sum();
    let s_zy: f64 = z.iter().zip(y).map(|(zi, yi)| zi * yi).sum();

    let denom = m * s_zz - s_z * s_z;
    let scale = s_zz.max(1.0);
    if denom.abs() < 1e-12 * scale {
        return Err(GreyError::SingularFit);
    }
    let slope = (m * s_zy - s_z * s_y) / denom;
    let a = -slope;
    let b = (s_y + a * s_z) / m;

    Ok(GreyModel { a, b, first_value: values[0], n_fit: values.len() })
}

impl GreyModel {
    /// Accumulated-scale response at position `j` (1-based): the whitening
    /// equation's solution, with the a→0 limit `first_value + b·(j−1)`.
    pub fn accumulated_at(&self, j: usize) -> f64 {
        debug_assert!(j >= 1);
        let k = (j - 1) as f64;
        if self.a.abs() < DEGENERATE_A {
            self.first_value + self.b * k
        } else {
            (self.first_value - self.b / self.a) * (-self.a * k).exp() + self.b / self.a
        }
    }

    /// Primitive-scale modeled value at position `j` (1-based): inverse
    /// accumulation of the response. Position 1 returns the anchored
    /// first observation.
    pub fn primitive_at(&self, j: usize) -> f64 {
        debug_assert!(j >= 1);
        if j == 1 {
            return self.first_value;
        }
        if self.a.abs() < DEGENERATE_A {
            return self.b;
        }
        let k = (j - 1) as f64;
        (self.first_value - self.b / self.a) * (-self.a * k).exp() * (1.0 - self.a.exp())
    }

    /// In-sample modeled values for positions 1..=n_fit.
    pub fn fitted_values(&self) -> Vec<f64> {
        (1..=self.n_fit).map(|j| self.primitive_at(j)).collect()
    }

    /// Out-of-sample forecasts for positions n_fit+1..=n_fit+horizon.
    pub fn forecast(&self, horizon: usize) -> Vec<f64> {
        (1..=horizon).map(|h| self.primitive_at(self.n_fit + h)).collect()
    }
}
