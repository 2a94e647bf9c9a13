//! Dense feed-forward networks trained from scratch: flat-array tensors,
//! affine layers with relu/linear/sigmoid/tanh activations, MSE loss,
//! Adam, and a mini-batch loop with best-on-validation checkpointing.
//!
//! The training loop is written against the [`GradientModel`] trait so the
//! LSTM reuses the same Adam/shuffling/checkpoint machinery unchanged.

mod adam;
mod net;
mod train;

pub use adam::{adam_step, AdamConfig, AdamState};
pub use net::{Activation, DenseNet, ForwardCache, Gradients, LayerSpec};
pub use train::{
    recursive_forecast, train, EpochRecord, GradientModel, TrainConfig, TrainOutcome,
    WindowPredictor,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum NeuralError {
    #[error("shape mismatch: expected {expected}, found {found}")]
    ShapeMismatch { expected: usize, found: usize },

    #[error("layer shapes do not chain: layer {layer} has fan_in {fan_in}, previous fan_out {previous}")]
    LayerChain { layer: usize, fan_in: usize, previous: usize },

    #[error("stale forward cache: parameters changed since the forward pass")]
    StaleCache,

    #[error("training diverged at epoch {epoch} (non-finite loss)")]
    Divergence { epoch: usize },

    #[error("invalid configuration: {message}")]
    BadConfig { message: String },
}
