//! Textual model checkpoints.
//!
//! Every checkpoint starts with a versioned header carrying the shared
//! envelope (model tag, seed, window length, normalization constants, the
//! last training date and the last normalized window), followed by a
//! model-specific block. Floats are written with 17 significant digits,
//! which round-trips 64-bit values losslessly.

use crate::boxjenkins::{ArimaModel, ArimaOrder};
use crate::data::Normalizer;
use crate::forest::{ForestConfig, ForestModel, RegressionTree, TreeNode};
use crate::grey::GreyModel;
use crate::lstm::LstmNet;
use crate::neural::{Activation, DenseNet, GradientModel, LayerSpec};
use chrono::NaiveDate;
use std::fmt::Write as _;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;
use thiserror::Error;

const MAGIC: &str = "chronocast-checkpoint v1";

#[derive(Debug, Error)]
pub enum CheckpointError {
    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },

    #[error("unsupported checkpoint header {found:?}")]
    UnsupportedVersion { found: String },
}

/// Fields shared by every model checkpoint.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckpointEnvelope {
    pub model_seed: u64,
    pub window_length: usize,
    pub normalizer: Normalizer,
    /// Last date covered by the data the model was fitted on.
    pub last_date: NaiveDate,
    /// Last `window_length` normalized values; the seed window for
    /// recursive forecasting. Empty for the statistical models.
    pub last_window_normalized: Vec<f64>,
}

#[derive(Debug, Clone)]
pub enum ModelCheckpoint {
    Gm11 { model: GreyModel },
    Arima { model: ArimaModel },
    Sarimax { model: ArimaModel },
    Ann { net: DenseNet, epoch: usize, validation_mse: f64 },
    Lstm { net: LstmNet, epoch: usize, validation_mse: f64 },
    Forest { model: ForestModel },
}

#[derive(Debug, Clone)]
pub struct Checkpoint {
    pub envelope: CheckpointEnvelope,
    pub model: ModelCheckpoint,
}

fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_vec(vs: &[f64]) -> String {
    vs.iter().map(|&v| fmt_f64(v)).collect::<Vec<_>>().join(" ")
}

impl Checkpoint {
    pub fn model_tag(&self) -> &'static str {
        match &self.model {
            ModelCheckpoint::Gm11 { .. } => "gm11",
            ModelCheckpoint::Arima { .. } => "arima",
            ModelCheckpoint::Sarimax { .. } => "sarimax",
            ModelCheckpoint::Ann { .. } => "ann",
            ModelCheckpoint::Lstm { .. } => "lstm",
            ModelCheckpoint::Forest { .. } => "forest",
        }
    }

    pub fn save(&self, path: &Path) -> Result<(), CheckpointError> {
        let mut file = std::fs::File::create(path)?;
        file.write_all(self.render().as_bytes())?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self, CheckpointError> {
        Self::read_from(std::fs::File::open(path)?)
    }

    /// Serializes the checkpoint to its textual form.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let env = &self.envelope;
        let _ = writeln!(out, "{MAGIC}");
        let _ = writeln!(out, "model: {}", self.model_tag());
        let _ = writeln!(out, "seed: {}", env.model_seed);
        let _ = writeln!(out, "window_length: {}", env.window_length);
        let _ = writeln!(out, "train_min: {}", fmt_f64(env.normalizer.train_min));
        let _ = writeln!(out, "train_max: {}", fmt_f64(env.normalizer.train_max));
        let _ = writeln!(out, "last_date: {}", env.last_date);
        let _ = writeln!(out, "last_window: {}", fmt_vec(&env.last_window_normalized));

        match &self.model {
            ModelCheckpoint::Gm11 { model } => {
                let _ = writeln!(out, "a: {}", fmt_f64(model.a));
                let _ = writeln!(out, "b: {}", fmt_f64(model.b));
                let _ = writeln!(out, "first_value: {}", fmt_f64(model.first_value));
                let _ = writeln!(out, "n_fit: {}", model.n_fit);
            }
            ModelCheckpoint::Arima { model } | ModelCheckpoint::Sarimax { model } => {
                let o = &model.order;
                let _ = writeln!(
                    out,
                    "order: {} {} {} {} {} {} {}",
                    o.p, o.d, o.q, o.seasonal_p, o.seasonal_d, o.seasonal_q, o.season_length
                );
                let _ = writeln!(out, "ar: {}", fmt_vec(&model.ar));
                let _ = writeln!(out, "ma: {}", fmt_vec(&model.ma));
                let _ = writeln!(out, "seasonal_ar: {}", fmt_vec(&model.seasonal_ar));
                let _ = writeln!(out, "seasonal_ma: {}", fmt_vec(&model.seasonal_ma));
                let _ = writeln!(out, "exog: {}", fmt_vec(&model.exog_coeffs));
                let _ = writeln!(out, "intercept: {}", fmt_f64(model.intercept));
                let _ = writeln!(out, "residual_variance: {}", fmt_f64(model.residual_variance));
                let _ = writeln!(out, "presample_mean: {}", fmt_f64(model.presample_mean));
                let _ = writeln!(out, "diff_tail: {}", fmt_vec(&model.diff_tail));
                let _ = writeln!(out, "resid_tail: {}", fmt_vec(&model.resid_tail));
                let _ = writeln!(out, "stages: {}", model.stage_tails.len());
                for (lag, tail) in &model.stage_tails {
                    let _ = writeln!(out, "stage: {} {}", lag, fmt_vec(tail));
                }
            }
            ModelCheckpoint::Ann { net, epoch, validation_mse } => {
                let layers = net
                    .specs()
                    .iter()
                    .map(|s| format!("{}x{}:{}", s.fan_in, s.fan_out, s.activation.name()))
                    .collect::<Vec<_>>()
                    .join(",");
                let _ = writeln!(out, "layers: {layers}");
                let _ = writeln!(out, "epoch: {epoch}");
                let _ = writeln!(out, "validation_mse: {}", fmt_f64(*validation_mse));
                write_params(&mut out, net);
            }
            ModelCheckpoint::Lstm { net, epoch, validation_mse } => {
                let hidden = net
                    .hidden_sizes()
                    .iter()
                    .map(usize::to_string)
                    .collect::<Vec<_>>()
                    .join(",");
                let _ = writeln!(out, "lstm_input: {}", net.lstm_input_size());
                let _ = writeln!(out, "hidden: {hidden}");
                let _ = writeln!(out, "relu_hidden: {}", net.relu_hidden());
                let _ = writeln!(out, "epoch: {epoch}");
                let _ = writeln!(out, "validation_mse: {}", fmt_f64(*validation_mse));
                write_params(&mut out, net);
            }
            ModelCheckpoint::Forest { model } => {
                let cfg = model.config();
                let _ = writeln!(out, "n_estimators: {}", cfg.n_estimators);
                let _ = writeln!(
                    out,
                    "max_depth: {}",
                    cfg.max_depth.map_or("none".to_string(), |d| d.to_string())
                );
                let _ = writeln!(out, "min_leaf: {}", cfg.min_leaf);
                let _ = writeln!(
                    out,
                    "m_try: {}",
                    cfg.m_try.map_or("all".to_string(), |m| m.to_string())
                );
                let _ = writeln!(out, "forest_seed: {}", cfg.seed);
                let _ = writeln!(out, "n_features: {}", model.n_features());
                let _ = writeln!(out, "target_min: {}", fmt_f64(model.target_min));
                let _ = writeln!(out, "target_max: {}", fmt_f64(model.target_max));
                let _ = writeln!(out, "trees: {}", model.trees().len());
                for tree in model.trees() {
                    let _ = writeln!(out, "tree: {} {}", tree.nodes().len(), tree.max_depth_reached());
                    for node in tree.nodes() {
                        match node {
                            TreeNode::Leaf { value } => {
                                let _ = writeln!(out, "leaf {}", fmt_f64(*value));
                            }
                            TreeNode::Split { feature, threshold, left, right } => {
                                let _ = writeln!(
                                    out,
                                    "split {} {} {} {}",
                                    feature,
                                    fmt_f64(*threshold),
                                    left,
                                    right
                                );
                            }
                        }
                    }
                }
            }
        }
        out
    }

    pub fn read_from<R: Read>(reader: R) -> Result<Self, CheckpointError> {
        let mut parser = Parser::new(BufReader::new(reader))?;
        parser.parse()
    }
}

fn write_params<M: GradientModel>(out: &mut String, net: &M) {
    let mut params = vec![0.0; net.param_count()];
    net.read_params(&mut params);
    let _ = writeln!(out, "params: {}", params.len());
    for p in &params {
        let _ = writeln!(out, "{}", fmt_f64(*p));
    }
}

fn parse_scalar<T: std::str::FromStr>(text: &str, what: &str) -> Result<T, CheckpointError> {
    text.parse().map_err(|_| CheckpointError::Malformed {
        line: 0,
        message: format!("bad {what}: {text:?}"),
    })
}

fn parse_vec(text: &str) -> Result<Vec<f64>, CheckpointError> {
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split_whitespace().map(|t| parse_scalar(t, "float")).collect()
}

struct Parser<R: BufRead> {
    lines: std::iter::Enumerate<std::io::Lines<R>>,
}

impl<R: BufRead> Parser<R> {
    fn new(reader: R) -> Result<Self, CheckpointError> {
        Ok(Parser { lines: reader.lines().enumerate() })
    }

    fn next_line(&mut self) -> Result<(usize, String), CheckpointError> {
        match self.lines.next() {
            Some((idx, Ok(line))) => Ok((idx + 1, line)),
            Some((idx, Err(e))) => {
                Err(CheckpointError::Malformed { line: idx + 1, message: e.to_string() })
            }
            None => Err(CheckpointError::Malformed {
                line: 0,
                message: "unexpected end of checkpoint".into(),
            }),
        }
    }

    /// Reads a `key: value` line, checking the key.
    fn field(&mut self, key: &str) -> Result<String, CheckpointError> {
        let (line_no, line) = self.next_line()?;
        let (k, v) = line.split_once(':').ok_or_else(|| CheckpointError::Malformed {
            line: line_no,
            message: format!("expected `{key}: ...`, found {line:?}"),
        })?;
        if k.trim() != key {
            return Err(CheckpointError::Malformed {
                line: line_no,
                message: format!("expected key {key:?}, found {:?}", k.trim()),
            });
        }
        Ok(v.trim().to_string())
    }

    fn parse(&mut self) -> Result<Checkpoint, CheckpointError> {
        let (_, magic) = self.next_line()?;
        if magic.trim() != MAGIC {
            return Err(CheckpointError::UnsupportedVersion { found: magic });
        }
        let tag = self.field("model")?;
        let model_seed: u64 = parse_scalar(&self.field("seed")?, "seed")?;
        let window_length: usize =
            parse_scalar(&self.field("window_length")?, "window_length")?;
        let train_min: f64 = parse_scalar(&self.field("train_min")?, "train_min")?;
        let train_max: f64 = parse_scalar(&self.field("train_max")?, "train_max")?;
        let last_date: NaiveDate = parse_scalar(&self.field("last_date")?, "last_date")?;
        let last_window_normalized = parse_vec(&self.field("last_window")?)?;
        let envelope = CheckpointEnvelope {
            model_seed,
            window_length,
            normalizer: Normalizer { train_min, train_max },
            last_date,
            last_window_normalized,
        };

        let model = match tag.as_str() {
            "gm11" => {
                let a: f64 = parse_scalar(&self.field("a")?, "a")?;
                let b: f64 = parse_scalar(&self.field("b")?, "b")?;
                let first_value: f64 =
                    parse_scalar(&self.field("first_value")?, "first_value")?;
                let n_fit: usize = parse_scalar(&self.field("n_fit")?, "n_fit")?;
                ModelCheckpoint::Gm11 { model: GreyModel { a, b, first_value, n_fit } }
            }
            "arima" | "sarimax" => {
                let order_text = self.field("order")?;
                let parts: Vec<usize> = order_text
                    .split_whitespace()
                    .map(|t| parse_scalar(t, "order"))
                    .collect::<Result<_, _>>()?;
                if parts.len() != 7 {
                    return Err(CheckpointError::Malformed {
                        line: 0,
                        message: format!("order needs 7 integers, found {order_text:?}"),
                    });
                }
                let order = ArimaOrder::new(parts[0], parts[1], parts[2]).with_seasonal(
                    parts[3], parts[4], parts[5], parts[6],
                );
                let ar = parse_vec(&self.field("ar")?)?;
                let ma = parse_vec(&self.field("ma")?)?;
                let seasonal_ar = parse_vec(&self.field("seasonal_ar")?)?;
                let seasonal_ma = parse_vec(&self.field("seasonal_ma")?)?;
                let exog_coeffs = parse_vec(&self.field("exog")?)?;
                let intercept: f64 = parse_scalar(&self.field("intercept")?, "intercept")?;
                let residual_variance: f64 =
                    parse_scalar(&self.field("residual_variance")?, "residual_variance")?;
                let presample_mean: f64 =
                    parse_scalar(&self.field("presample_mean")?, "presample_mean")?;
                let diff_tail = parse_vec(&self.field("diff_tail")?)?;
                let resid_tail = parse_vec(&self.field("resid_tail")?)?;
                let n_stages: usize = parse_scalar(&self.field("stages")?, "stages")?;
                let mut stage_tails = Vec::with_capacity(n_stages);
                for _ in 0..n_stages {
                    let text = self.field("stage")?;
                    let mut it = text.split_whitespace();
                    let lag: usize = parse_scalar(it.next().unwrap_or_default(), "stage lag")?;
                    let tail: Vec<f64> = it
                        .map(|t| parse_scalar(t, "stage value"))
                        .collect::<Result<_, _>>()?;
                    stage_tails.push((lag, tail));
                }
                let model = ArimaModel {
                    order,
                    ar,
                    ma,
                    seasonal_ar,
                    seasonal_ma,
                    exog_coeffs,
                    intercept,
                    residual_variance,
                    stability_warning: None,
                    residuals: Vec::new(),
                    css_trace: Vec::new(),
                    presample_mean,
                    diff_tail,
                    resid_tail,
                    stage_tails,
                };
                if tag == "arima" {
                    ModelCheckpoint::Arima { model }
                } else {
                    ModelCheckpoint::Sarimax { model }
                }
            }
            "ann" => {
                let layers_text = self.field("layers")?;
                let mut specs = Vec::new();
                for part in layers_text.split(',') {
                    let (dims, act) =
                        part.split_once(':').ok_or_else(|| CheckpointError::Malformed {
                            line: 0,
                            message: format!("bad layer spec {part:?}"),
                        })?;
                    let (fi, fo) =
                        dims.split_once('x').ok_or_else(|| CheckpointError::Malformed {
                            line: 0,
                            message: format!("bad layer dims {dims:?}"),
                        })?;
                    let activation =
                        Activation::from_name(act).ok_or_else(|| CheckpointError::Malformed {
                            line: 0,
                            message: format!("unknown activation {act:?}"),
                        })?;
                    specs.push(LayerSpec::new(
                        parse_scalar(fi, "fan_in")?,
                        parse_scalar(fo, "fan_out")?,
                        activation,
                    ));
                }
                let epoch: usize = parse_scalar(&self.field("epoch")?, "epoch")?;
                let validation_mse: f64 =
                    parse_scalar(&self.field("validation_mse")?, "validation_mse")?;
                let mut net = DenseNet::zeroed(specs).map_err(|e| CheckpointError::Malformed {
                    line: 0,
                    message: e.to_string(),
                })?;
                self.read_params_into(&mut net)?;
                ModelCheckpoint::Ann { net, epoch, validation_mse }
            }
            "lstm" => {
                let lstm_input: usize =
                    parse_scalar(&self.field("lstm_input")?, "lstm_input")?;
                let hidden: Vec<usize> = self
                    .field("hidden")?
                    .split(',')
                    .map(|t| parse_scalar(t, "hidden size"))
                    .collect::<Result<_, _>>()?;
                let relu_hidden: bool =
                    parse_scalar(&self.field("relu_hidden")?, "relu_hidden")?;
                let epoch: usize = parse_scalar(&self.field("epoch")?, "epoch")?;
                let validation_mse: f64 =
                    parse_scalar(&self.field("validation_mse")?, "validation_mse")?;
                let mut net = LstmNet::zeroed(lstm_input, &hidden, relu_hidden, window_length)
                    .map_err(|e| CheckpointError::Malformed { line: 0, message: e.to_string() })?;
                self.read_params_into(&mut net)?;
                ModelCheckpoint::Lstm { net, epoch, validation_mse }
            }
            "forest" => {
                let n_estimators: usize =
                    parse_scalar(&self.field("n_estimators")?, "n_estimators")?;
                let max_depth_text = self.field("max_depth")?;
                let max_depth = if max_depth_text == "none" {
                    None
                } else {
                    Some(parse_scalar(&max_depth_text, "max_depth")?)
                };
                let min_leaf: usize = parse_scalar(&self.field("min_leaf")?, "min_leaf")?;
                let m_try_text = self.field("m_try")?;
                let m_try = if m_try_text == "all" {
                    None
                } else {
                    Some(parse_scalar(&m_try_text, "m_try")?)
                };
                let seed: u64 = parse_scalar(&self.field("forest_seed")?, "forest_seed")?;
                let n_features: usize =
                    parse_scalar(&self.field("n_features")?, "n_features")?;
                let target_min: f64 =
                    parse_scalar(&self.field("target_min")?, "target_min")?;
                let target_max: f64 =
                    parse_scalar(&self.field("target_max")?, "target_max")?;
                let n_trees: usize = parse_scalar(&self.field("trees")?, "trees")?;
                let mut trees = Vec::with_capacity(n_trees);
                for _ in 0..n_trees {
                    let head = self.field("tree")?;
                    let mut it = head.split_whitespace();
                    let n_nodes: usize =
                        parse_scalar(it.next().unwrap_or_default(), "node count")?;
                    let depth: usize =
                        parse_scalar(it.next().unwrap_or_default(), "tree depth")?;
                    let mut nodes = Vec::with_capacity(n_nodes);
                    for _ in 0..n_nodes {
                        let (line_no, line) = self.next_line()?;
                        let mut toks = line.split_whitespace();
                        match toks.next() {
                            Some("leaf") => {
                                let value: f64 = parse_scalar(toks.next().unwrap_or_default(), "leaf value")?;
                                nodes.push(TreeNode::Leaf { value });
                            }
                            Some("split") => {
                                let feature: usize = parse_scalar(toks.next().unwrap_or_default(), "feature")?;
                                let threshold: f64 = parse_scalar(toks.next().unwrap_or_default(), "threshold")?;
                                let left: usize =
                                    parse_scalar(toks.next().unwrap_or_default(), "left")?;
                                let right: usize =
                                    parse_scalar(toks.next().unwrap_or_default(), "right")?;
                                nodes.push(TreeNode::Split { feature, threshold, left, right });
                            }
                            other => {
                                return Err(CheckpointError::Malformed {
                                    line: line_no,
                                    message: format!("unknown node kind {other:?}"),
                                });
                            }
                        }
                    }
                    trees.push(RegressionTree::from_nodes(nodes, depth));
                }
                let config = ForestConfig { n_estimators, max_depth, min_leaf, m_try, seed };
                ModelCheckpoint::Forest {
                    model: ForestModel::from_parts(trees, config, n_features, target_min, target_max),
                }
            }
            other => {
                return Err(CheckpointError::Malformed {
                    line: 2,
                    message: format!("unknown model tag {other:?}"),
                });
            }
        };

        Ok(Checkpoint { envelope, model })
    }

    fn read_params_into<M: GradientModel>(&mut self, net: &mut M) -> Result<(), CheckpointError> {
        let count: usize = parse_scalar(&self.field("params")?, "params")?;
        if count != net.param_count() {
            return Err(CheckpointError::Malformed {
                line: 0,
                message: format!(
                    "parameter count {count} does not match architecture ({})",
                    net.param_count()
                ),
            });
        }
        let mut params = Vec::with_capacity(count);
        for _ in 0..count {
            let (line_no, line) = self.next_line()?;
            let v: f64 = line.trim().parse().map_err(|_| CheckpointError::Malformed {
                line: line_no,
                message: format!("bad parameter {line:?}"),
            })?;
            params.push(v);
        }
        net.write_params(&params);
        Ok(())
    }
}
