//! Experiment configuration: model list, per-model settings, grid axes,
//! seeds and profiles. Everything serializes, so a config file round-trips
//! through serde (the CLI reads TOML into these types).

use super::HarnessError;
use serde::{Deserialize, Serialize};

/// The six benchmark model families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Gm11,
    Arima,
    Sarimax,
    Ann,
    RandomForest,
    Lstm,
}

impl ModelKind {
    pub const ALL: [ModelKind; 6] = [
        ModelKind::Gm11,
        ModelKind::Arima,
        ModelKind::Sarimax,
        ModelKind::RandomForest,
        ModelKind::Ann,
        ModelKind::Lstm,
    ];

    pub fn label(self) -> &'static str {
        match self {
            ModelKind::Gm11 => "gm11",
            ModelKind::Arima => "arima",
            ModelKind::Sarimax => "sarimax",
            ModelKind::Ann => "ann",
            ModelKind::RandomForest => "random_forest",
            ModelKind::Lstm => "lstm",
        }
    }

    pub fn from_label(label: &str) -> Option<Self> {
        match label {
            "gm11" => Some(ModelKind::Gm11),
            "arima" => Some(ModelKind::Arima),
            "sarimax" => Some(ModelKind::Sarimax),
            "ann" => Some(ModelKind::Ann),
            "random_forest" | "rf" => Some(ModelKind::RandomForest),
            "lstm" => Some(ModelKind::Lstm),
            _ => None,
        }
    }

    pub fn is_statistical(self) -> bool {
        matches!(self, ModelKind::Gm11 | ModelKind::Arima | ModelKind::Sarimax)
    }
}

/// Epoch budget preset: `ci` runs short trainings for fast verification,
/// `full` uses the production epoch counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Profile {
    Ci,
    #[default]
    Full,
}

impl Profile {
    pub fn default_epochs(self) -> usize {
        match self {
            Profile::Ci => 300,
            Profile::Full => 3000,
        }
    }
}

/// How the statistical models predict the evaluation horizon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ForecastMode {
    /// One multi-step forecast from the end of the fitting data.
    #[default]
    FixedOrigin,
    /// One-step-ahead predictions with actuals refreshed after each step
    /// (no refitting). GM(1,1) always runs fixed-origin.
    Rolling,
}

impl ForecastMode {
    pub fn label(self) -> &'static str {
        match self {
            ForecastMode::FixedOrigin => "fixed-origin multi-step",
            ForecastMode::Rolling => "rolling one-step",
        }
    }
}

/// How the ML models are scored on the test split.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum MlEvalMode {
    /// Each test window holds actual lagged values (the default).
    #[default]
    OneStep,
    /// Predictions feed back into the window across the whole horizon.
    Recursive,
}

/// Input file layout for the CLI and config files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum DataFormat {
    #[default]
    CarbonMonitor,
    Tidy,
}

/// Where the experiment data comes from (config-file form).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DataSourceConfig {
    pub path: String,
    #[serde(default)]
    pub format: DataFormat,
}

fn default_window() -> usize {
    3
}

fn default_ratios() -> [f64; 3] {
    [0.8, 0.1, 0.1]
}

fn default_seed() -> u64 {
    42
}

fn default_batch() -> usize {
    32
}

fn default_lr() -> f64 {
    1e-3
}

fn default_ann_hidden() -> Vec<usize> {
    vec![12, 12]
}

fn default_lstm_hidden() -> Vec<usize> {
    vec![50, 50]
}

fn default_true() -> bool {
    true
}

fn default_estimators() -> usize {
    100
}

fn default_depth() -> Option<usize> {
    Some(20)
}

fn default_min_leaf() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default)]
pub struct GreySettings {
    /// Tail length of pre-origin observations GM(1,1) is fitted on;
    /// `None` uses the full available history.
    pub fit_window: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ArimaSettings {
    pub p: usize,
    pub d: usize,
    pub q: usize,
}

impl Default for ArimaSettings {
    fn default() -> Self {
        ArimaSettings { p: 0, d: 1, q: 3 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SarimaxSettings {
    pub p: usize,
    pub d: usize,
    pub q: usize,
    pub seasonal_p: usize,
    pub seasonal_d: usize,
    pub seasonal_q: usize,
    pub season_length: usize,
    /// Adds day-of-week indicator regressors when true.
    pub calendar_exog: bool,
}

impl Default for SarimaxSettings {
    fn default() -> Self {
        SarimaxSettings {
            p: 0,
            d: 1,
            q: 3,
            seasonal_p: 0,
            seasonal_d: 0,
            seasonal_q: 0,
            season_length: 7,
            calendar_exog: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AnnSettings {
    pub hidden: Vec<usize>,
    /// Overrides the profile's epoch budget when set.
    pub epochs: Option<usize>,
    pub batch_size: usize,
    pub learning_rate: f64,
}

impl Default for AnnSettings {
    fn default() -> Self {
        AnnSettings {
            hidden: default_ann_hidden(),
            epochs: None,
            batch_size: default_batch(),
            learning_rate: default_lr(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LstmSettings {
    pub hidden: Vec<usize>,
    /// Extra relu on each layer's emitted hidden states.
    pub relu_hidden: bool,
    pub epochs: Option<usize>,
    pub batch_size: usize,
    pub learning_rate: f64,
}

impl Default for LstmSettings {
    fn default() -> Self {
        LstmSettings {
            hidden: default_lstm_hidden(),
            relu_hidden: default_true(),
            epochs: None,
            batch_size: default_batch(),
            learning_rate: default_lr(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ForestSettings {
    pub n_estimators: usize,
    /// `Some(depth)` caps tree depth; `None` grows to purity.
    pub max_depth: Option<usize>,
    pub min_leaf: usize,
    /// Features considered per split; `None` uses all.
    pub m_try: Option<usize>,
    /// Bootstrap master seed; defaults to 2 (the benchmark's fixed
    /// random state) independent of the experiment seed.
    pub seed: Option<u64>,
}

impl Default for ForestSettings {
    fn default() -> Self {
        ForestSettings {
            n_estimators: default_estimators(),
            max_depth: default_depth(),
            min_leaf: default_min_leaf(),
            m_try: None,
            seed: None,
        }
    }
}

/// Optional grid axes; empty axes fall back to built-in defaults.
/// Depth axes use 0 to mean "unlimited".
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default)]
pub struct GridSpecs {
    pub arima_p: Vec<usize>,
    pub arima_d: Vec<usize>,
    pub arima_q: Vec<usize>,
    pub ann_hidden: Vec<usize>,
    pub lstm_hidden: Vec<usize>,
    pub forest_depth: Vec<usize>,
}

impl GridSpecs {
    pub fn arima_axes(&self) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
        let p = if self.arima_p.is_empty() { vec![0, 1, 2, 3] } else { self.arima_p.clone() };
        let d = if self.arima_d.is_empty() { vec![0, 1, 2] } else { self.arima_d.clone() };
        let q = if self.arima_q.is_empty() { vec![0, 1, 2, 3] } else { self.arima_q.clone() };
        (p, d, q)
    }

    pub fn ann_widths(&self) -> Vec<usize> {
        if self.ann_hidden.is_empty() { vec![8, 12, 16] } else { self.ann_hidden.clone() }
    }

    pub fn lstm_widths(&self) -> Vec<usize> {
        if self.lstm_hidden.is_empty() { vec![32, 50, 64] } else { self.lstm_hidden.clone() }
    }

    pub fn forest_depths(&self) -> Vec<Option<usize>> {
        if self.forest_depth.is_empty() {
            vec![Some(10), Some(20), None]
        } else {
            self.forest_depth.iter().map(|&d| if d == 0 { None } else { Some(d) }).collect()
        }
    }
}

/// Everything `run_experiment` needs besides the series itself.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub window_length: usize,
    pub ratios: [f64; 3],
    /// Master seed; drives network initialization and shuffling streams.
    pub seed: u64,
    pub profile: Profile,
    /// Pins every model to the benchmark's published table settings and
    /// disables grid search.
    pub paper_config: bool,
    /// Runs grid search before the final fit (ignored under
    /// `paper_config`).
    pub grid_search: bool,
    pub forecast_mode: ForecastMode,
    /// Test-split protocol for the ML models.
    pub ml_eval: MlEvalMode,
    pub models: Vec<ModelKind>,
    pub grey: GreySettings,
    pub arima: ArimaSettings,
    pub sarimax: SarimaxSettings,
    pub ann: AnnSettings,
    pub lstm: LstmSettings,
    pub forest: ForestSettings,
    pub grids: GridSpecs,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            window_length: default_window(),
            ratios: default_ratios(),
            seed: default_seed(),
            profile: Profile::default(),
            paper_config: false,
            grid_search: false,
            forecast_mode: ForecastMode::default(),
            ml_eval: MlEvalMode::default(),
            models: ModelKind::ALL.to_vec(),
            grey: GreySettings::default(),
            arima: ArimaSettings::default(),
            sarimax: SarimaxSettings::default(),
            ann: AnnSettings::default(),
            lstm: LstmSettings::default(),
            forest: ForestSettings::default(),
            grids: GridSpecs::default(),
        }
    }
}

impl ExperimentConfig {
    /// The benchmark-table configuration at the given profile.
    pub fn paper(profile: Profile) -> Self {
        ExperimentConfig { profile, paper_config: true, ..ExperimentConfig::default() }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.models.is_empty() {
            return Err(HarnessError::BadConfig { message: "at least one model required".into() });
        }
        if self.window_length == 0 {
            return Err(HarnessError::BadConfig { message: "window_length must be ≥ 1".into() });
        }
        let sum: f64 = self.ratios.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(HarnessError::BadConfig {
                message: format!("split ratios {:?} must sum to 1", self.ratios),
            });
        }
        if self.ann.hidden.is_empty() || self.lstm.hidden.is_empty() {
            return Err(HarnessError::BadConfig {
                message: "ann/lstm need at least one hidden layer".into(),
            });
        }
        Ok(())
    }

    pub fn ratios_tuple(&self) -> (f64, f64, f64) {
        (self.ratios[0], self.ratios[1], self.ratios[2])
    }

    pub fn epochs_for(&self, explicit: Option<usize>) -> usize {
        explicit.unwrap_or_else(|| self.profile.default_epochs())
    }

    /// Forest bootstrap seed: explicit setting wins, then the fixed
    /// benchmark random state.
    pub fn forest_seed(&self) -> u64 {
        self.forest.seed.unwrap_or(2)
    }

    /// Per-model derived seeds, decorrelated from the master seed.
    pub fn ann_init_seed(&self) -> u64 {
        self.seed.wrapping_mul(31).wrapping_add(101)
    }

    pub fn ann_shuffle_seed(&self) -> u64 {
        self.seed.wrapping_mul(31).wrapping_add(102)
    }

    pub fn lstm_init_seed(&self) -> u64 {
        self.seed.wrapping_mul(31).wrapping_add(201)
    }

    pub fn lstm_shuffle_seed(&self) -> u64 {
        self.seed.wrapping_mul(31).wrapping_add(202)
    }
}
