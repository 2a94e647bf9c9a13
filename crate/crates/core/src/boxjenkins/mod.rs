//! Box-Jenkins models: ARIMA(p,d,q) and SARIMAX(p,d,q)(P,D,Q)_s with
//! optional exogenous regressors.
//!
//! Estimation minimizes the conditional sum of squared one-step residuals
//! (CSS) of the ARMA recursion on the differenced series; pre-sample
//! residuals are fixed at zero and pre-sample values at the differenced
//! mean. The companion diagnostics are the augmented Dickey-Fuller unit
//! root test and the Ljung-Box residual whiteness test.

mod adf;
mod diff;
mod exog;
mod ljung_box;
mod model;
mod neldermead;

pub use adf::{adf_test, default_adf_lag, AdfOutcome, ADF_CRITICAL_5PCT};
pub use diff::{difference, undifference, DifferenceState};
pub use exog::day_of_week_exog;
pub use ljung_box::{ljung_box, LjungBoxOutcome};
pub use model::{fit, forecast, one_step_predictions, ArimaModel, ArimaOrder};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum BoxJenkinsError {
    #[error("series too short: {len} observations, need at least {min}")]
    TooShort { len: usize, min: usize },

    #[error("degenerate regression: singular design matrix")]
    SingularRegression,

    #[error("optimizer did not converge within {iterations} iterations (last objective {last_objective})")]
    NonConvergence { iterations: usize, last_objective: f64 },

    #[error("invalid order: {message}")]
    InvalidOrder { message: String },

    #[error("exogenous matrix has {rows} rows, expected {expected}")]
    ExogShape { rows: usize, expected: usize },

    #[error("model fitted with exogenous regressors requires future exogenous rows to forecast")]
    MissingFutureExog,

    #[error("difference state does not match input: {message}")]
    StateMismatch { message: String },

    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },
}
