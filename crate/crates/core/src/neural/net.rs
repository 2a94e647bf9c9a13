//! The dense network: affine-then-activation layers over flat arrays.

use super::NeuralError;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Activation {
    Relu,
    Linear,
    Sigmoid,
    Tanh,
}

impl Activation {
    #[inline]
    pub fn apply(self, z: f64) -> f64 {
        match self {
            Activation::Relu => z.max(0.0),
            Activation::Linear => z,
            Activation::Sigmoid => 1.0 / (1.0 + (-z).exp()),
            Activation::Tanh => z.tanh(),
        }
    }

    /// Derivative as a function of the pre-activation.
    #[inline]
    pub fn derivative(self, z: f64) -> f64 {
        match self {
            Activation::Relu => {
                if z > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Activation::Linear => 1.0,
            Activation::Sigmoid => {
                let s = 1.0 / (1.0 + (-z).exp());
                s * (1.0 - s)
            }
            Activation::Tanh => 1.0 - z.tanh().powi(2),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Activation::Relu => "relu",
            Activation::Linear => "linear",
            Activation::Sigmoid => "sigmoid",
            Activation::Tanh => "tanh",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "relu" => Some(Activation::Relu),
            "linear" => Some(Activation::Linear),
            "sigmoid" => Some(Activation::Sigmoid),
            "tanh" => Some(Activation::Tanh),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LayerSpec {
    pub fan_in: usize,
    pub fan_out: usize,
    pub activation: Activation,
}

impl LayerSpec {
    pub fn new(fan_in: usize, fan_out: usize, activation: Activation) -> Self {
        LayerSpec { fan_in, fan_out, activation }
    }
}

/// A dense feed-forward network. Weights are row-major
/// `fan_out × fan_in` per layer; biases one per output unit.
#[derive(Debug, Clone)]
pub struct DenseNet {
    specs: Vec<LayerSpec>,
    weights: Vec<Vec<f64>>,
    biases: Vec<Vec<f64>>,
    rng_seed: u64,
    /// Incremented on every parameter write; lets backward detect a cache
    /// taken from different parameters.
    version: u64,
}

/// Per-layer inputs and pre-activations retained for the backward pass.
#[derive(Debug, Clone)]
pub struct ForwardCache {
    /// activations[0] is the batch input, activations[l+1] layer l's output.
    activations: Vec<Vec<Vec<f64>>>,
    pre_activations: Vec<Vec<Vec<f64>>>,
    version: u64,
}

/// Gradients aligned with the network's weight/bias layout, plus the
/// gradient with respect to the batch input.
#[derive(Debug, Clone)]
pub struct Gradients {
    pub weights: Vec<Vec<f64>>,
    pub biases: Vec<Vec<f64>>,
    pub input: Vec<Vec<f64>>,
}

impl DenseNet {
    /// Builds a seeded network. Relu layers get He-uniform weights,
    /// everything else Xavier-uniform; biases start at zero.
    pub fn new(specs: Vec<LayerSpec>, rng_seed: u64) -> Result<Self, NeuralError> {
        validate_chain(&specs)?;
        let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
        let mut weights = Vec::with_capacity(specs.len());
        let mut biases = Vec::with_capacity(specs.len());
        for spec in &specs {
            let limit = match spec.activation {
                Activation::Relu => (6.0 / spec.fan_in as f64).sqrt(),
                _ => (6.0 / (spec.fan_in + spec.fan_out) as f64).sqrt(),
            };
            let w = (0..spec.fan_in * spec.fan_out)
                .map(|_| rng.gen_range(-limit..limit))
                .collect();
            weights.push(w);
            biases.push(vec![0.0; spec.fan_out]);
        }
        Ok(DenseNet { specs, weights, biases, rng_seed, version: 0 })
    }

    /// All-zero parameters; used by tests that need exact outputs.
    pub fn zeroed(specs: Vec<LayerSpec>) -> Result<Self, NeuralError> {
        validate_chain(&specs)?;
        let weights = specs.iter().map(|s| vec![0.0; s.fan_in * s.fan_out]).collect();
        let biases = specs.iter().map(|s| vec![0.0; s.fan_out]).collect();
        Ok(DenseNet { specs, weights, biases, rng_seed: 0, version: 0 })
    }

    pub fn specs(&self) -> &[LayerSpec] {
        &self.specs
    }

    pub fn rng_seed(&self) -> u64 {
        self.rng_seed
    }

    pub fn input_width(&self) -> usize {
        self.specs[0].fan_in
    }

    pub fn output_width(&self) -> usize {
        self.specs[self.specs.len() - 1].fan_out
    }

    /// Trainable parameter count: Σ (fan_in·fan_out + fan_out).
    pub fn param_count(&self) -> usize {
        self.specs.iter().map(|s| s.fan_in * s.fan_out + s.fan_out).sum()
    }

    /// Copies all parameters, layer by layer, weights row-major then bias.
    pub fn read_params(&self, out: &mut [f64]) {
        let mut idx = 0;
        for (w, b) in self.weights.iter().zip(&self.biases) {
            out[idx..idx + w.len()].copy_from_slice(w);
            idx += w.len();
            out[idx..idx + b.len()].copy_from_slice(b);
            idx += b.len();
        }
        debug_assert_eq!(idx, out.len());
    }

    pub fn write_params(&mut self, params: &[f64]) {
        let mut idx = 0;
        for (w, b) in self.weights.iter_mut().zip(&mut self.biases) {
            let w_len = w.len();
            w.copy_from_slice(&params[idx..idx + w_len]);
            idx += w_len;
            let b_len = b.len();
            b.copy_from_slice(&params[idx..idx + b_len]);
            idx += b_len;
        }
        debug_assert_eq!(idx, params.len());
        self.version += 1;
    }

    /// Weight/bias mutation for tests.
    pub fn set_layer(&mut self, layer: usize, weights: Vec<f64>, biases: Vec<f64>) {
        assert_eq!(weights.len(), self.weights[layer].len());
        assert_eq!(biases.len(), self.biases[layer].len());
        self.weights[layer] = weights;
        self.biases[layer] = biases;
        self.version += 1;
    }

    /// Batch forward pass. Each input row must have `input_width` values.
    pub fn forward(&self, batch: &[&[f64]]) -> Result<(Vec<Vec<f64>>, ForwardCache), NeuralError> {
        for row in batch {
            if row.len() != self.input_width() {
                return Err(NeuralError::ShapeMismatch {
                    expected: self.input_width(),
                    found: row.len(),
                });
            }
        }

        let mut activations: Vec<Vec<Vec<f64>>> = Vec::with_capacity(self.specs.len() + 1);
        activations.push(batch.iter().map(|r| r.to_vec()).collect());
        let mut pre_activations = Vec::with_capacity(self.specs.len());

        for (l, spec) in self.specs.iter().enumerate() {
            let input = &activations[l];
            let mut z_rows = Vec::with_capacity(input.len());
            let mut a_rows = Vec::with_capacity(input.len());
            for row in input {
                let mut z = vec![0.0; spec.fan_out];
                for (o, z_o) in z.iter_mut().enumerate() {
                    let w_row = &self.weights[l][o * spec.fan_in..(o + 1) * spec.fan_in];
                    let mut acc = self.biases[l][o];
                    for (w, x) in w_row.iter().zip(row) {
                        acc += w * x;
                    }
                    *z_o = acc;
                }
                let a = z.iter().map(|&v| spec.activation.apply(v)).collect();
                z_rows.push(z);
                a_rows.push(a);
            }
            pre_activations.push(z_rows);
            activations.push(a_rows);
        }

        let output = activations[self.specs.len()].clone();
        Ok((output, ForwardCache { activations, pre_activations, version: self.version }))
    }

    /// Backpropagation from `d_output` (∂loss/∂output per batch row).
    pub fn backward(
        &self,
        cache: &ForwardCache,
        d_output: &[Vec<f64>],
    ) -> Result<Gradients, NeuralError> {
        if cache.version != self.version {
            return Err(NeuralError::StaleCache);
        }
        let batch = cache.activations[0].len();
        if d_output.len() != batch {
            return Err(NeuralError::ShapeMismatch { expected: batch, found: d_output.len() });
        }

        let mut grad_w: Vec<Vec<f64>> =
            self.weights.iter().map(|w| vec![0.0; w.len()]).collect();
        let mut grad_b: Vec<Vec<f64>> = self.biases.iter().map(|b| vec![0.0; b.len()]).collect();

        // delta starts as dL/da for the last layer
        let mut delta: Vec<Vec<f64>> = d_output.to_vec();
        for l in (0..self.specs.len()).rev() {
            let spec = &self.specs[l];
            let mut next_delta = vec![vec![0.0; spec.fan_in]; batch];
            for (b_idx, row_delta) in delta.iter().enumerate() {
                if row_delta.len() != spec.fan_out {
                    return Err(NeuralError::ShapeMismatch {
                        expected: spec.fan_out,
                        found: row_delta.len(),
                    });
                }
                let z_row = &cache.pre_activations[l][b_idx];
                let a_prev = &cache.activations[l][b_idx];
                for o in 0..spec.fan_out {
                    let dz = row_delta[o] * spec.activation.derivative(z_row[o]);
                    grad_b[l][o] += dz;
                    let w_row = &self.weights[l][o * spec.fan_in..(o + 1) * spec.fan_in];
                    let gw_row = &mut grad_w[l][o * spec.fan_in..(o + 1) * spec.fan_in];
                    for i in 0..spec.fan_in {
                        gw_row[i] += dz * a_prev[i];
                        next_delta[b_idx][i] += dz * w_row[i];
                    }
                }
            }
            delta = next_delta;
        }

        Ok(Gradients { weights: grad_w, biases: grad_b, input: delta })
    }

    /// Smallest |pre-activation| over the relu layers of a forward pass.
    /// Finite-difference gradient checks are only valid when this clears
    /// the step size: relu is kinked at zero.
    pub fn relu_kink_margin(&self, cache: &ForwardCache) -> f64 {
        let mut margin = f64::INFINITY;
        for (l, spec) in self.specs.iter().enumerate() {
            if spec.activation != Activation::Relu {
                continue;
            }
            for row in &cache.pre_activations[l] {
                for &z in row {
                    margin = margin.min(z.abs());
                }
            }
        }
        margin
    }

    /// Scalar prediction for a single window (output width must be 1).
    pub fn predict_one(&self, window: &[f64]) -> Result<f64, NeuralError> {
        debug_assert_eq!(self.output_width(), 1);
        let (out, _) = self.forward(&[window])?;
        Ok(out[0][0])
    }
}

fn validate_chain(specs: &[LayerSpec]) -> Result<(), NeuralError> {
    if specs.is_empty() {
        return Err(NeuralError::BadConfig { message: "network needs at least one layer".into() });
    }
    for l in 1..specs.len() {
        if specs[l].fan_in != specs[l - 1].fan_out {
            return Err(NeuralError::LayerChain {
                layer: l,
                fan_in: specs[l].fan_in,
                previous: specs[l - 1].fan_out,
            });
        }
    }
    Ok(())
}
