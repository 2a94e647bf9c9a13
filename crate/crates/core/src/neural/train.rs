//! Mini-batch training with seeded shuffling and best-on-validation
//! checkpointing, generic over anything exposing flat parameters and a
//! batch MSE gradient.

use super::adam::{adam_step, AdamConfig, AdamState};
use super::net::DenseNet;
use super::NeuralError;
use crate::data::PreparedData;
use rand::seq::SliceRandom;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Anything that maps a lag window to a one-step-ahead prediction.
pub trait WindowPredictor {
    fn predict_window(&self, window: &[f64]) -> f64;
}

/// A supervised one-step-ahead model trainable by the shared loop.
pub trait GradientModel: WindowPredictor {
    fn param_count(&self) -> usize;
    fn read_params(&self, out: &mut [f64]);
    fn write_params(&mut self, params: &[f64]);
    /// Window width the model expects.
    fn input_width(&self) -> usize;
    /// Batch mean-squared error and its gradient with respect to all
    /// parameters, written into `grad` (same layout as `read_params`).
    fn batch_loss_and_grad(&self, windows: &[&[f64]], targets: &[f64], grad: &mut [f64]) -> f64;
}

impl WindowPredictor for DenseNet {
    fn predict_window(&self, window: &[f64]) -> f64 {
        self.predict_one(window).expect("window width validated by caller")
    }
}

impl GradientModel for DenseNet {
    fn param_count(&self) -> usize {
        DenseNet::param_count(self)
    }

    fn read_params(&self, out: &mut [f64]) {
        DenseNet::read_params(self, out);
    }

    fn write_params(&mut self, params: &[f64]) {
        DenseNet::write_params(self, params);
    }

    fn input_width(&self) -> usize {
        DenseNet::input_width(self)
    }

    fn batch_loss_and_grad(&self, windows: &[&[f64]], targets: &[f64], grad: &mut [f64]) -> f64 {
        let (out, cache) = self.forward(windows).expect("window width validated by caller");
        let batch = windows.len() as f64;
        let mut loss = 0.0;
        let d_out: Vec<Vec<f64>> = out
            .iter()
            .zip(targets)
            .map(|(o, &t)| {
                let e = o[0] - t;
                loss += e * e;
                vec![2.0 * e / batch]
            })
            .collect();
        let grads = self.backward(&cache, &d_out).expect("cache is fresh");
        let mut idx = 0;
        for (w, b) in grads.weights.iter().zip(&grads.biases) {
            grad[idx..idx + w.len()].copy_from_slice(w);
            idx += w.len();
            grad[idx..idx + b.len()].copy_from_slice(b);
            idx += b.len();
        }
        loss / batch
    }
}

/// Training-loop configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainConfig {
    pub epochs: usize,
    pub batch_size: usize,
    pub adam: AdamConfig,
    pub shuffle_seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig { epochs: 3000, batch_size: 32, adam: AdamConfig::default(), shuffle_seed: 0 }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<(), NeuralError> {
        if self.epochs == 0 || self.batch_size == 0 {
            return Err(NeuralError::BadConfig {
                message: "epochs and batch_size must be at least 1".into(),
            });
        }
        if !(0.0 < self.adam.beta1 && self.adam.beta1 < 1.0)
            || !(0.0 < self.adam.beta2 && self.adam.beta2 < 1.0)
        {
            return Err(NeuralError::BadConfig { message: "adam betas must lie in (0, 1)".into() });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpochRecord {
    pub epoch: usize,
    pub train_mse: f64,
    pub validation_mse: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainOutcome {
    pub best_epoch: usize,
    pub best_validation_mse: f64,
    pub final_validation_mse: f64,
    pub history: Vec<EpochRecord>,
}

fn mse_over<M: WindowPredictor>(model: &M, windows: &[&[f64]], targets: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (w, &t) in windows.iter().zip(targets) {
        let e = model.predict_window(w) - t;
        acc += e * e;
    }
    acc / windows.len() as f64
}

/// Trains on the prepared training split with per-epoch seeded shuffling,
/// evaluating validation MSE after every epoch; on return the model holds
/// the parameters of the best validation epoch.
pub fn train<M: GradientModel>(
    model: &mut M,
    prepared: &PreparedData,
    cfg: &TrainConfig,
) -> Result<TrainOutcome, NeuralError> {
    cfg.validate()?;
    if prepared.window_length() != model.input_width() {
        return Err(NeuralError::ShapeMismatch {
            expected: model.input_width(),
            found: prepared.window_length(),
        });
    }

    let split = prepared.split().clone();
    if split.validation.is_empty() {
        return Err(NeuralError::BadConfig {
            message: "validation split is empty; checkpointing needs validation samples".into(),
        });
    }
    let (train_windows, train_targets) = prepared.range_samples(&split.train);
    let (val_windows, val_targets) = prepared.range_samples(&split.validation);

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.shuffle_seed);
    let mut order: Vec<usize> = (0..train_windows.len()).collect();

    let n_params = model.param_count();
    let mut adam_state = AdamState::new(n_params);
    let mut params = vec![0.0; n_params];
    model.read_params(&mut params);
    let mut grad = vec![0.0; n_params];

    let mut history = Vec::with_capacity(cfg.epochs);
    let mut best_params = params.clone();
    let mut best_validation_mse = f64::INFINITY;
    let mut best_epoch = 0;

    let mut batch_windows: Vec<&[f64]> = Vec::with_capacity(cfg.batch_size);
    let mut batch_targets: Vec<f64> = Vec::with_capacity(cfg.batch_size);

    for epoch in 1..=cfg.epochs {
        order.shuffle(&mut rng);
        for chunk in order.chunks(cfg.batch_size) {
            batch_windows.clear();
            batch_targets.clear();
            for &i in chunk {
                batch_windows.push(train_windows[i]);
                batch_targets.push(train_targets[i]);
            }
            let loss = model.batch_loss_and_grad(&batch_windows, &batch_targets, &mut grad);
            if !loss.is_finite() {
                return Err(NeuralError::Divergence { epoch });
            }
            adam_step(&mut params, &grad, &mut adam_state, &cfg.adam);
            model.write_params(&params);
        }

        let train_mse = mse_over(model, &train_windows, &train_targets);
        let validation_mse = mse_over(model, &val_windows, &val_targets);
        if !train_mse.is_finite() || !validation_mse.is_finite() {
            return Err(NeuralError::Divergence { epoch });
        }
        history.push(EpochRecord { epoch, train_mse, validation_mse });
        if validation_mse < best_validation_mse {
            best_validation_mse = validation_mse;
            best_params.copy_from_slice(&params);
            best_epoch = epoch;
        }
    }

    let final_validation_mse = history.last().map(|r| r.validation_mse).unwrap_or(f64::NAN);
    model.write_params(&best_params);

    Ok(TrainOutcome { best_epoch, best_validation_mse, final_validation_mse, history })
}

/// Feeds each one-step prediction back into the sliding window.
pub fn recursive_forecast<M: WindowPredictor + ?Sized>(
    model: &M,
    seed_window: &[f64],
    horizon: usize,
) -> Vec<f64> {
    let mut window = seed_window.to_vec();
    let mut out = Vec::with_capacity(horizon);
    for _ in 0..horizon {
        let pred = model.predict_window(&window);
        out.push(pred);
        window.rotate_left(1);
        let last = window.len() - 1;
        window[last] = pred;
    }
    out
}
