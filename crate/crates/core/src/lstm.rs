//! Stacked LSTM regressor with exact backpropagation through time.
//!
//! Each cell follows the standard gate equations: forget/input/output
//! gates are sigmoids and the candidate is a tanh, all acting on the
//! concatenation `[H_{t−1}, X_t]`; the cell state updates as
//! `C_t = f∘C_{t−1} + i∘C̃_t` and the hidden state as `H_t = o∘tanh(C_t)`.
//!
//! The hidden-state sequence a layer *emits* (to the next layer and to the
//! dense head) can optionally pass through an extra elementwise relu; the
//! recurrent path always carries the raw `H_t`. Training reuses the
//! mini-batch Adam loop from [`crate::neural`] via [`GradientModel`].

use crate::neural::{GradientModel, NeuralError, WindowPredictor};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[inline]
fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

/// One LSTM layer: four gate weight matrices of shape
/// `hidden_size × (hidden_size + input_size)` plus gate biases.
#[derive(Debug, Clone)]
pub struct LstmLayer {
    pub input_size: usize,
    pub hidden_size: usize,
    pub w_forget: Vec<f64>,
    pub w_input: Vec<f64>,
    pub w_cell: Vec<f64>,
    pub w_output: Vec<f64>,
    pub b_forget: Vec<f64>,
    pub b_input: Vec<f64>,
    pub b_cell: Vec<f64>,
    pub b_output: Vec<f64>,
}

/// Cell and hidden state vectors; zero at sequence start.
#[derive(Debug, Clone, PartialEq)]
pub struct LstmState {
    pub cell: Vec<f64>,
    pub hidden: Vec<f64>,
}

impl LstmState {
    pub fn zeros(hidden_size: usize) -> Self {
        LstmState { cell: vec![0.0; hidden_size], hidden: vec![0.0; hidden_size] }
    }
}

/// Intermediate values of one cell step, retained for backpropagation.
#[derive(Debug, Clone)]
pub struct StepCache {
    concat: Vec<f64>,
    forget: Vec<f64>,
    input: Vec<f64>,
    candidate: Vec<f64>,
    output: Vec<f64>,
    cell_prev: Vec<f64>,
    cell: Vec<f64>,
    cell_tanh: Vec<f64>,
    hidden: Vec<f64>,
}

impl StepCache {
    pub fn forget(&self) -> &[f64] {
        &self.forget
    }

    pub fn input(&self) -> &[f64] {
        &self.input
    }

    pub fn candidate(&self) -> &[f64] {
        &self.candidate
    }

    pub fn output(&self) -> &[f64] {
        &self.output
    }

    pub fn cell_prev(&self) -> &[f64] {
        &self.cell_prev
    }

    pub fn cell(&self) -> &[f64] {
        &self.cell
    }
}

impl LstmLayer {
    fn zeroed(input_size: usize, hidden_size: usize) -> Self {
        let w = vec![0.0; hidden_size * (hidden_size + input_size)];
        let b = vec![0.0; hidden_size];
        LstmLayer {
            input_size,
            hidden_size,
            w_forget: w.clone(),
            w_input: w.clone(),
            w_cell: w.clone(),
            w_output: w,
            b_forget: b.clone(),
            b_input: b.clone(),
            b_cell: b.clone(),
            b_output: b,
        }
    }

    fn seeded(input_size: usize, hidden_size: usize, rng: &mut ChaCha8Rng) -> Self {
        let cols = hidden_size + input_size;
        let limit = (6.0 / (cols + hidden_size) as f64).sqrt();
        let mut draw =
            |n: usize| -> Vec<f64> { (0..n).map(|_| rng.gen_range(-limit..limit)).collect() };
        let n_w = hidden_size * cols;
        LstmLayer {
            input_size,
            hidden_size,
            w_forget: draw(n_w),
            w_input: draw(n_w),
            w_cell: draw(n_w),
            w_output: draw(n_w),
            // forget-gate bias starts at one so early training retains memory
            b_forget: vec![1.0; hidden_size],
            b_input: vec![0.0; hidden_size],
            b_cell: vec![0.0; hidden_size],
            b_output: vec![0.0; hidden_size],
        }
    }

    fn param_count(&self) -> usize {
        4 * (self.hidden_size * (self.hidden_size + self.input_size) + self.hidden_size)
    }

    /// One gate pre-activation: `W·concat + b`.
    fn gate(&self, w: &[f64], b: &[f64], concat: &[f64], out: &mut [f64]) {
        let cols = self.hidden_size + self.input_size;
        for (h, o) in out.iter_mut().enumerate() {
            let row = &w[h * cols..(h + 1) * cols];
            let mut acc = b[h];
            for (wv, xv) in row.iter().zip(concat) {
                acc += wv * xv;
            }
            *o = acc;
        }
    }

    /// Advances the recurrence by one time step.
    pub fn cell_step(
        &self,
        state: &LstmState,
        x: &[f64],
    ) -> Result<(LstmState, StepCache), NeuralError> {
        if x.len() != self.input_size {
            return Err(NeuralError::ShapeMismatch { expected: self.input_size, found: x.len() });
        }
        let h = self.hidden_size;
        let mut concat = Vec::with_capacity(h + self.input_size);
        concat.extend_from_slice(&state.hidden);
        concat.extend_from_slice(x);

        let mut forget = vec![0.0; h];
        let mut input = vec![0.0; h];
        let mut candidate = vec![0.0; h];
        let mut output = vec![0.0; h];
        self.gate(&self.w_forget, &self.b_forget, &concat, &mut forget);
        self.gate(&self.w_input, &self.b_input, &concat, &mut input);
        self.gate(&self.w_cell, &self.b_cell, &concat, &mut candidate);
        self.gate(&self.w_output, &self.b_output, &concat, &mut output);
        for v in forget.iter_mut().chain(&mut input).chain(&mut output) {
            *v = sigmoid(*v);
        }
        for v in candidate.iter_mut() {
            *v = v.tanh();
        }

        let mut cell = vec![0.0; h];
        let mut cell_tanh = vec![0.0; h];
        let mut hidden = vec![0.0; h];
        for j in 0..h {
            cell[j] = forget[j] * state.cell[j] + input[j] * candidate[j];
            cell_tanh[j] = cell[j].tanh();
            hidden[j] = output[j] * cell_tanh[j];
        }

        let cache = StepCache {
            concat,
            forget,
            input,
            candidate,
            output,
            cell_prev: state.cell.clone(),
            cell: cell.clone(),
            cell_tanh,
            hidden: hidden.clone(),
        };
        Ok((LstmState { cell, hidden }, cache))
    }
}

/// A stack of LSTM layers plus a linear dense head on the last emitted
/// hidden state.
#[derive(Debug, Clone)]
pub struct LstmNet {
    layers: Vec<LstmLayer>,
    head_weights: Vec<f64>,
    head_bias: f64,
    relu_hidden: bool,
    expected_window: usize,
    rng_seed: u64,
}

/// Caches of one full sequence forward pass.
pub struct SequenceCache {
    /// `steps[layer][t]`.
    steps: Vec<Vec<StepCache>>,
    /// Emitted (post-relu when enabled) hidden sequences per layer.
    emitted: Vec<Vec<Vec<f64>>>,
    /// Raw inputs consumed by layer 0, one scalar slice per step.
    inputs: Vec<Vec<f64>>,
}

impl SequenceCache {
    /// Smallest |H_t| over all layers and steps. Finite-difference
    /// gradient checks are only valid when this clears the step size:
    /// the optional relu on emitted hidden states is kinked at zero.
    pub fn relu_kink_margin(&self) -> f64 {
        self.steps
            .iter()
            .flatten()
            .flat_map(|s| &s.hidden)
            .fold(f64::INFINITY, |m, &h| m.min(h.abs()))
    }
}

impl LstmNet {
    /// Seeded stack; `hidden_sizes` gives one entry per LSTM layer.
    pub fn new(
        input_size: usize,
        hidden_sizes: &[usize],
        relu_hidden: bool,
        expected_window: usize,
        rng_seed: u64,
    ) -> Result<Self, NeuralError> {
        if hidden_sizes.is_empty() {
            return Err(NeuralError::BadConfig { message: "need at least one LSTM layer".into() });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
        let mut layers = Vec::with_capacity(hidden_sizes.len());
        let mut fan_in = input_size;
        for &hsize in hidden_sizes {
            layers.push(LstmLayer::seeded(fan_in, hsize, &mut rng));
            fan_in = hsize;
        }
        let limit = (6.0 / (fan_in + 1) as f64).sqrt();
        let head_weights = (0..fan_in).map(|_| rng.gen_range(-limit..limit)).collect();
        Ok(LstmNet { layers, head_weights, head_bias: 0.0, relu_hidden, expected_window, rng_seed })
    }

    /// All-zero parameters (tests).
    pub fn zeroed(
        input_size: usize,
        hidden_sizes: &[usize],
        relu_hidden: bool,
        expected_window: usize,
    ) -> Result<Self, NeuralError> {
        if hidden_sizes.is_empty() {
            return Err(NeuralError::BadConfig { message: "need at least one LSTM layer".into() });
        }
        let mut layers = Vec::with_capacity(hidden_sizes.len());
        let mut fan_in = input_size;
        for &hsize in hidden_sizes {
            layers.push(LstmLayer::zeroed(fan_in, hsize));
            fan_in = hsize;
        }
        Ok(LstmNet {
            layers,
            head_weights: vec![0.0; fan_in],
            head_bias: 0.0,
            relu_hidden,
            expected_window,
            rng_seed: 0,
        })
    }

    pub fn layers(&self) -> &[LstmLayer] {
        &self.layers
    }

    pub fn head_weights(&self) -> &[f64] {
        &self.head_weights
    }

    pub fn head_bias(&self) -> f64 {
        self.head_bias
    }

    pub fn relu_hidden(&self) -> bool {
        self.relu_hidden
    }

    pub fn rng_seed(&self) -> u64 {
        self.rng_seed
    }

    pub fn expected_window(&self) -> usize {
        self.expected_window
    }

    pub fn hidden_sizes(&self) -> Vec<usize> {
        self.layers.iter().map(|l| l.hidden_size).collect()
    }

    pub fn lstm_input_size(&self) -> usize {
        self.layers[0].input_size
    }

    /// Trainable parameter count, summed from the allocated arrays.
    pub fn param_count(&self) -> usize {
        self.layers.iter().map(LstmLayer::param_count).sum::<usize>() + self.head_weights.len() + 1
    }

    /// Runs the stack over a width-1 sequence and applies the dense head
    /// to the final emitted hidden state.
    pub fn forward_sequence(&self, sequence: &[f64]) -> Result<(f64, SequenceCache), NeuralError> {
        if sequence.is_empty() {
            return Err(NeuralError::ShapeMismatch { expected: 1, found: 0 });
        }
        let inputs: Vec<Vec<f64>> = sequence.iter().map(|&v| vec![v]).collect();

        let mut steps: Vec<Vec<StepCache>> = Vec::with_capacity(self.layers.len());
        let mut emitted: Vec<Vec<Vec<f64>>> = Vec::with_capacity(self.layers.len());
        let mut current: Vec<Vec<f64>> = inputs.clone();
        for layer in &self.layers {
            let mut state = LstmState::zeros(layer.hidden_size);
            let mut layer_steps = Vec::with_capacity(current.len());
            let mut layer_emitted = Vec::with_capacity(current.len());
            for x in &current {
                let (next, cache) = layer.cell_step(&state, x)?;
                let mut out = cache.hidden.clone();
                if self.relu_hidden {
                    for v in &mut out {
                        *v = v.max(0.0);
                    }
                }
                layer_emitted.push(out);
                layer_steps.push(cache);
                state = next;
            }
            current = layer_emitted.clone();
            steps.push(layer_steps);
            emitted.push(layer_emitted);
        }

        let last = emitted[self.layers.len() - 1].last().expect("non-empty sequence");
        let prediction =
            self.head_bias + self.head_weights.iter().zip(last).map(|(w, h)| w * h).sum::<f64>();
        Ok((prediction, SequenceCache { steps, emitted, inputs }))
    }

    /// Full backpropagation through time from `d_prediction`
    /// (∂loss/∂prediction). Returns gradients in the flat parameter layout
    /// and the gradient with respect to each input step.
    pub fn backward_sequence(
        &self,
        cache: &SequenceCache,
        d_prediction: f64,
    ) -> (Vec<f64>, Vec<f64>) {
        let n_layers = self.layers.len();
        let seq_len = cache.inputs.len();

        let mut grad = vec![0.0; self.param_count()];
        // gradient of each layer's emitted sequence, filled top-down
        let mut d_emitted: Vec<Vec<Vec<f64>>> = self
            .layers
            .iter()
            .map(|l| vec![vec![0.0; l.hidden_size]; seq_len])
            .collect();

        // dense head
        let top_last = &cache.emitted[n_layers - 1][seq_len - 1];
        let head_offset = self.layers.iter().map(LstmLayer::param_count).sum::<usize>();
        for (j, (&w, &e)) in self.head_weights.iter().zip(top_last).enumerate() {
            grad[head_offset + j] += d_prediction * e;
            d_emitted[n_layers - 1][seq_len - 1][j] += d_prediction * w;
        }
        grad[head_offset + self.head_weights.len()] += d_prediction;

        let mut d_inputs = vec![0.0; seq_len];
        let mut layer_offset = head_offset;
        for l in (0..n_layers).rev() {
            let layer = &self.layers[l];
            layer_offset -= layer.param_count();
            let h = layer.hidden_size;
            let cols = h + layer.input_size;
            let n_w = h * cols;
            // gate blocks in (f, i, c, o) order: weights then bias each
            let wf_off = layer_offset;
            let bf_off = wf_off + n_w;
            let wi_off = bf_off + h;
            let bi_off = wi_off + n_w;
            let wc_off = bi_off + h;
            let bc_off = wc_off + n_w;
            let wo_off = bc_off + h;
            let bo_off = wo_off + n_w;

            let mut d_hidden_next = vec![0.0; h];
            let mut d_cell_next = vec![0.0; h];
            for t in (0..seq_len).rev() {
                let step = &cache.steps[l][t];
                // emitted gradient passes back through the optional relu
                let mut d_hidden = std::mem::take(&mut d_hidden_next);
                for j in 0..h {
                    let de = d_emitted[l][t][j];
                    if de != 0.0 {
                        let pass = if self.relu_hidden && step.hidden[j] <= 0.0 { 0.0 } else { de };
                        d_hidden[j] += pass;
                    }
                }

                let mut d_cell = std::mem::take(&mut d_cell_next);
                let mut d_concat = vec![0.0; cols];
                let mut d_cell_prev = vec![0.0; h];
                for j in 0..h {
                    // H_t = o ∘ tanh(C_t)
                    let d_o = d_hidden[j] * step.cell_tanh[j];
                    d_cell[j] += d_hidden[j] * step.output[j] * (1.0 - step.cell_tanh[j].powi(2));
                    // C_t = f ∘ C_{t−1} + i ∘ C̃
                    let d_f = d_cell[j] * step.cell_prev[j];
                    let d_i = d_cell[j] * step.candidate[j];
                    let d_cand = d_cell[j] * step.input[j];
                    d_cell_prev[j] = d_cell[j] * step.forget[j];

                    // back through the gate nonlinearities
                    let a_f = d_f * step.forget[j] * (1.0 - step.forget[j]);
                    let a_i = d_i * step.input[j] * (1.0 - step.input[j]);
                    let a_c = d_cand * (1.0 - step.candidate[j].powi(2));
                    let a_o = d_o * step.output[j] * (1.0 - step.output[j]);

                    grad[bf_off + j] += a_f;
                    grad[bi_off + j] += a_i;
                    grad[bc_off + j] += a_c;
                    grad[bo_off + j] += a_o;
                    let row = j * cols;
                    for k in 0..cols {
                        let x = step.concat[k];
                        grad[wf_off + row + k] += a_f * x;
                        grad[wi_off + row + k] += a_i * x;
                        grad[wc_off + row + k] += a_c * x;
                        grad[wo_off + row + k] += a_o * x;
                        d_concat[k] += a_f * layer.w_forget[row + k]
                            + a_i * layer.w_input[row + k]
                            + a_c * layer.w_cell[row + k]
                            + a_o * layer.w_output[row + k];
                    }
                }

                // split concat gradient into recurrent and input parts
                d_hidden_next = d_concat[..h].to_vec();
                d_cell_next = d_cell_prev;
                if l == 0 {
                    d_inputs[t] += d_concat[h];
                } else {
                    for (j, slot) in d_emitted[l - 1][t].iter_mut().enumerate() {
                        *slot += d_concat[h + j];
                    }
                }
            }
        }

        (grad, d_inputs)
    }
}

impl WindowPredictor for LstmNet {
    fn predict_window(&self, window: &[f64]) -> f64 {
        self.forward_sequence(window).expect("validated window").0
    }
}

impl GradientModel for LstmNet {
    fn param_count(&self) -> usize {
        LstmNet::param_count(self)
    }

    fn read_params(&self, out: &mut [f64]) {
        let mut idx = 0;
        let mut put = |src: &[f64], idx: &mut usize| {
            out[*idx..*idx + src.len()].copy_from_slice(src);
            *idx += src.len();
        };
        for layer in &self.layers {
            put(&layer.w_forget, &mut idx);
            put(&layer.b_forget, &mut idx);
            put(&layer.w_input, &mut idx);
            put(&layer.b_input, &mut idx);
            put(&layer.w_cell, &mut idx);
            put(&layer.b_cell, &mut idx);
            put(&layer.w_output, &mut idx);
            put(&layer.b_output, &mut idx);
        }
        put(&self.head_weights, &mut idx);
        out[idx] = self.head_bias;
        debug_assert_eq!(idx + 1, LstmNet::param_count(self));
    }

    fn write_params(&mut self, params: &[f64]) {
        let mut idx = 0;
        fn take(dst: &mut [f64], params: &[f64], idx: &mut usize) {
            let len = dst.len();
            dst.copy_from_slice(&params[*idx..*idx + len]);
            *idx += len;
        }
        for layer in &mut self.layers {
            take(&mut layer.w_forget, params, &mut idx);
            take(&mut layer.b_forget, params, &mut idx);
            take(&mut layer.w_input, params, &mut idx);
            take(&mut layer.b_input, params, &mut idx);
            take(&mut layer.w_cell, params, &mut idx);
            take(&mut layer.b_cell, params, &mut idx);
            take(&mut layer.w_output, params, &mut idx);
            take(&mut layer.b_output, params, &mut idx);
        }
        take(&mut self.head_weights, params, &mut idx);
        self.head_bias = params[idx];
        debug_assert_eq!(idx + 1, LstmNet::param_count(self));
    }

    fn input_width(&self) -> usize {
        self.expected_window
    }

    fn batch_loss_and_grad(&self, windows: &[&[f64]], targets: &[f64], grad: &mut [f64]) -> f64 {
        grad.fill(0.0);
        let batch = windows.len() as f64;
        let mut loss = 0.0;
        for (window, &target) in windows.iter().zip(targets) {
            let (pred, cache) = self.forward_sequence(window).expect("validated window");
            let e = pred - target;
            loss += e * e;
            let (g, _) = self.backward_sequence(&cache, 2.0 * e / batch);
            for (acc, gi) in grad.iter_mut().zip(&g) {
                *acc += gi;
            }
        }
        loss / batch
    }
}
