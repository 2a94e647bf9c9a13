//! Random-forest regression: CART trees grown by the squared-error
//! criterion on bootstrap resamples, predictions by averaging.
//!
//! Determinism: tree `k` draws its bootstrap (and, when enabled, its
//! per-split feature subsets) from an independent ChaCha stream derived
//! from the master seed, so trees can be built in parallel without
//! affecting results.

use crate::data::PreparedData;
use crate::neural::WindowPredictor;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ForestError {
    #[error("empty training set")]
    EmptyTrainingSet,

    #[error("invalid configuration: {message}")]
    BadConfig { message: String },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TreeNode {
    Split { feature: usize, threshold: f64, left: usize, right: usize },
    Leaf { value: f64 },
}

/// A CART regression tree stored as a node arena (root at index 0).
#[derive(Debug, Clone, PartialEq)]
pub struct RegressionTree {
    nodes: Vec<TreeNode>,
    max_depth_reached: usize,
}

impl RegressionTree {
    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn max_depth_reached(&self) -> usize {
        self.max_depth_reached
    }

    pub fn from_nodes(nodes: Vec<TreeNode>, max_depth_reached: usize) -> Self {
        RegressionTree { nodes, max_depth_reached }
    }

    pub fn predict(&self, features: &[f64]) -> f64 {
        let mut idx = 0;
        loop {
            match self.nodes[idx] {
                TreeNode::Leaf { value } => return value,
                TreeNode::Split { feature, threshold, left, right } => {
                    idx = if features[feature] < threshold { left } else { right };
                }
            }
        }
    }
}

/// Forest hyperparameters. `m_try = None` considers every feature at each
/// split; `max_depth = None` grows until purity or `min_leaf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForestConfig {
    pub n_estimators: usize,
    pub max_depth: Option<usize>,
    pub min_leaf: usize,
    pub m_try: Option<usize>,
    pub seed: u64,
}

impl Default for ForestConfig {
    fn default() -> Self {
        ForestConfig { n_estimators: 100, max_depth: Some(20), min_leaf: 1, m_try: None, seed: 2 }
    }
}

#[derive(Debug, Clone)]
pub struct ForestModel {
    trees: Vec<RegressionTree>,
    config: ForestConfig,
    n_features: usize,
    /// Training-target range; every forest prediction lies inside it.
    pub target_min: f64,
    pub target_max: f64,
}

struct TreeBuilder<'a> {
    windows: &'a [&'a [f64]],
    targets: &'a [f64],
    n_features: usize,
    max_depth: Option<usize>,
    min_leaf: usize,
    m_try: usize,
}

impl TreeBuilder<'_> {
    fn build(&self, indices: Vec<usize>, rng: &mut ChaCha8Rng) -> RegressionTree {
        let mut nodes = Vec::new();
        let mut max_depth_reached = 0;
        self.grow(indices, 0, rng, &mut nodes, &mut max_depth_reached);
        RegressionTree { nodes, max_depth_reached }
    }

    fn grow(
        &self,
        indices: Vec<usize>,
        depth: usize,
        rng: &mut ChaCha8Rng,
        nodes: &mut Vec<TreeNode>,
        max_depth_reached: &mut usize,
    ) -> usize {
        *max_depth_reached = (*max_depth_reached).max(depth);
        let mean = indices.iter().map(|&i| self.targets[i]).sum::<f64>() / indices.len() as f64;

        let depth_capped = self.max_depth.is_some_and(|d| depth >= d);
        let pure = indices.iter().all(|&i| self.targets[i] == self.targets[indices[0]]);
        if depth_capped || pure || indices.len() <= self.min_leaf {
            let id = nodes.len();
            nodes.push(TreeNode::Leaf { value: mean });
            return id;
        }

        let features: Vec<usize> = if self.m_try >= self.n_features {
            (0..self.n_features).collect()
        } else {
            // sample m_try distinct features, order-stable for determinism
            let mut pool: Vec<usize> = (0..self.n_features).collect();
            let mut chosen = Vec::with_capacity(self.m_try);
            for _ in 0..self.m_try {
                let pick = rng.gen_range(0..pool.len());
                chosen.push(pool.swap_remove(pick));
            }
            chosen.sort_unstable();
            chosen
        };

        // best split: lowest weighted child squared error, ties broken by
        // lowest feature index then smallest threshold
        let mut best: Option<(f64, usize, f64)> = None;
        for &feature in &features {
            if let Some((cost, threshold)) = self.best_split_on(&indices, feature) {
                let better = match best {
                    None => true,
                    Some((bc, bf, bt)) => {
                        cost < bc - 1e-15
                            || (cost - bc).abs() <= 1e-15
                                && (feature < bf || (feature == bf && threshold < bt))
                    }
                };
                if better {
                    best = Some((cost, feature, threshold));
                }
            }
        }

        let Some((_, feature, threshold)) = best else {
            // no admissible split (all candidate features constant)
            let id = nodes.len();
            nodes.push(TreeNode::Leaf { value: mean });
            return id;
        };

        let (left_idx, right_idx): (Vec<usize>, Vec<usize>) =
            indices.iter().partition(|&&i| self.windows[i][feature] < threshold);

        let id = nodes.len();
        nodes.push(TreeNode::Split { feature, threshold, left: 0, right: 0 });
        let left = self.grow(left_idx, depth + 1, rng, nodes, max_depth_reached);
        let right = self.grow(right_idx, depth + 1, rng, nodes, max_depth_reached);
        if let TreeNode::Split { left: l, right: r, .. } = &mut nodes[id] {
            *l = left;
            *r = right;
        }
        id
    }

    /// Best threshold for one feature: midpoints between consecutive
    /// distinct sorted values, cost = left SSE + right SSE.
    fn best_split_on(&self, indices: &[usize], feature: usize) -> Option<(f64, f64)> {
        let mut order: Vec<usize> = indices.to_vec();
        order.sort_by(|&a, &b| {
            self.windows[a][feature]
                .partial_cmp(&self.windows[b][feature])
                .expect("finite features")
        });

        let n = order.len();
        let mut prefix_sum = vec![0.0; n + 1];
        let mut prefix_sq = vec![0.0; n + 1];
        for (k, &i) in order.iter().enumerate() {
            prefix_sum[k + 1] = prefix_sum[k] + self.targets[i];
            prefix_sq[k + 1] = prefix_sq[k] + self.targets[i] * self.targets[i];
        }
        let total_sum = prefix_sum[n];
        let total_sq = prefix_sq[n];

        let mut best: Option<(f64, f64)> = None;
        for k in 1..n {
            let prev = self.windows[order[k - 1]][feature];
            let here = self.windows[order[k]][feature];
            if here <= prev {
                continue; // identical feature values cannot separate
            }
            let threshold = (prev + here) / 2.0;
            let (nl, nr) = (k as f64, (n - k) as f64);
            let sse_left = prefix_sq[k] - prefix_sum[k] * prefix_sum[k] / nl;
            let sse_right =
                (total_sq - prefix_sq[k]) - (total_sum - prefix_sum[k]).powi(2) / nr;
            let cost = sse_left + sse_right;
            let better = match best {
                None => true,
                Some((bc, bt)) => cost < bc - 1e-15 || ((cost - bc).abs() <= 1e-15 && threshold < bt),
            };
            if better {
                best = Some((cost, threshold));
            }
        }
        best
    }
}

/// Grows a single tree on the given samples (no bootstrap).
pub fn fit_tree(
    windows: &[&[f64]],
    targets: &[f64],
    rng: &mut ChaCha8Rng,
    max_depth: Option<usize>,
    m_try: Option<usize>,
    min_leaf: usize,
) -> Result<RegressionTree, ForestError> {
    if windows.is_empty() {
        return Err(ForestError::EmptyTrainingSet);
    }
    let n_features = windows[0].len();
    let builder = TreeBuilder {
        windows,
        targets,
        n_features,
        max_depth,
        min_leaf: min_leaf.max(1),
        m_try: m_try.unwrap_or(n_features).max(1),
    };
    Ok(builder.build((0..windows.len()).collect(), rng))
}

impl ForestModel {
    /// Fits on explicit samples: `n_estimators` trees, each on a
    /// with-replacement bootstrap of the full sample count.
    pub fn fit_samples(
        windows: &[&[f64]],
        targets: &[f64],
        config: ForestConfig,
    ) -> Result<Self, ForestError> {
        if windows.is_empty() {
            return Err(ForestError::EmptyTrainingSet);
        }
        if config.n_estimators == 0 {
            return Err(ForestError::BadConfig { message: "need at least one tree".into() });
        }
        let n = windows.len();
        let n_features = windows[0].len();
        let builder = TreeBuilder {
            windows,
            targets,
            n_features,
            max_depth: config.max_depth,
            min_leaf: config.min_leaf.max(1),
            m_try: config.m_try.unwrap_or(n_features).max(1),
        };

        let trees: Vec<RegressionTree> = (0..config.n_estimators)
            .into_par_iter()
            .map(|k| {
                let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
                rng.set_stream(k as u64);
                let indices: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
                builder.build(indices, &mut rng)
            })
            .collect();

        let target_min = targets.iter().copied().fold(f64::INFINITY, f64::min);
        let target_max = targets.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Ok(ForestModel { trees, config, n_features, target_min, target_max })
    }

    /// Fits on the training split of prepared data.
    pub fn fit_prepared(prepared: &PreparedData, config: ForestConfig) -> Result<Self, ForestError> {
        let (windows, targets) = prepared.range_samples(&prepared.split().train);
        Self::fit_samples(&windows, &targets, config)
    }

    pub fn from_parts(
        trees: Vec<RegressionTree>,
        config: ForestConfig,
        n_features: usize,
        target_min: f64,
        target_max: f64,
    ) -> Self {
        ForestModel { trees, config, n_features, target_min, target_max }
    }

    pub fn trees(&self) -> &[RegressionTree] {
        &self.trees
    }

    pub fn config(&self) -> &ForestConfig {
        &self.config
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    /// Arithmetic mean of the per-tree predictions.
    pub fn predict(&self, features: &[f64]) -> f64 {
        let sum: f64 = self.trees.iter().map(|t| t.predict(features)).sum();
        sum / self.trees.len() as f64
    }
}

impl WindowPredictor for ForestModel {
    fn predict_window(&self, window: &[f64]) -> f64 {
        self.predict(window)
    }
}
