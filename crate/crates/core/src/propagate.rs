//! Error transport through a stack of linear layers.
//!
//! A dense stack and a compressed stack share weights and inputs. In each
//! compressed layer the weights go through the composition and the incoming
//! activations are quantized; the trace records the relative L2 gap between
//! the two stacks after every layer.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::compose::{compose_tensor, Order};
use crate::error::{Error, Result};
use crate::quantize::{quantize_chunks, QuantFormat};
use crate::sparsify::SparsityPattern;
use crate::tensorcore::{gaussian_vec, SeedSpec, Tensor};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Activation {
    #[default]
    Relu,
    Identity,
}

impl Activation {
    fn apply(self, v: &mut [f64]) {
        if self == Activation::Relu {
            for x in v {
                *x = x.max(0.0);
            }
        }
    }
}

impl FromStr for Activation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "relu" => Ok(Activation::Relu),
            "identity" | "linear" | "none" => Ok(Activation::Identity),
            _ => Err(Error::InvalidConfig(format!("unknown activation `{s}`"))),
        }
    }
}

impl fmt::Display for Activation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Activation::Relu => "RELU",
            Activation::Identity => "IDENTITY",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StackConfig {
    pub depth: usize,
    pub width: usize,
    pub activation: Activation,
    /// Weight standard deviation; `None` means `1 / sqrt(width)`.
    pub weight_std: Option<f64>,
    pub batch: usize,
    pub format: QuantFormat,
    pub pattern: SparsityPattern,
    pub order: Order,
    /// Layers to compress; `None` compresses all of them.
    pub compress_layers: Option<Vec<usize>>,
    pub seed: u64,
}

impl StackConfig {
    pub fn new(
        depth: usize,
        width: usize,
        format: QuantFormat,
        pattern: SparsityPattern,
        order: Order,
        seed: u64,
    ) -> Self {
        Self {
            depth,
            width,
            activation: Activation::default(),
            weight_std: None,
            batch: 32,
            format,
            pattern,
            order,
            compress_layers: None,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.depth == 0 || self.width == 0 || self.batch == 0 {
            return Err(Error::InvalidConfig(format!(
                "depth, width and batch must be positive (got {}, {}, {})",
                self.depth, self.width, self.batch
            )));
        }
        if let Some(std) = self.weight_std {
            if !(std.is_finite() && std > 0.0) {
                return Err(Error::InvalidConfig(format!(
                    "weight_std must be positive, got {std}"
                )));
            }
        }
        if let Some(bad) = self
            .compress_layers
            .iter()
            .flatten()
            .find(|&&l| l >= self.depth)
        {
            return Err(Error::InvalidConfig(format!(
                "compressed layer {bad} is outside the stack of depth {}",
                self.depth
            )));
        }
        if !self.width.is_multiple_of(self.format.block_size) {
            return Err(Error::Indivisible {
                len: self.width,
                divisor: self.format.block_size,
                what: "width by block size",
            });
        }
        self.format.validate()?;
        self.pattern.check_len(self.width * self.width)
    }

    fn compresses(&self, layer: usize) -> bool {
        self.compress_layers
            .as_ref()
            .is_none_or(|ls| ls.contains(&layer))
    }

    fn std(&self) -> f64 {
        self.weight_std.unwrap_or(1.0 / (self.width as f64).sqrt())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropagationTrace {
    pub order: Order,
    pub seed: u64,
    /// `|Y_hat_i - Y_i|_2 / |Y_i|_2` after each layer, over the whole batch.
    pub rel_l2: Vec<f64>,
}

impl PropagationTrace {
    pub fn final_error(&self) -> f64 {
        *self.rel_l2.last().expect("depth >= 1")
    }
}

/// `x` is `batch x d_in`, `w` is `d_out x d_in`, both row-major.
fn forward(x: &[f64], w: &[f64], d: usize, act: Activation) -> Vec<f64> {
    let mut y = vec![0.0; x.len()];
    y.par_chunks_mut(d)
        .zip(x.par_chunks(d))
        .for_each(|(out, row)| {
            for (o, wr) in out.iter_mut().zip(w.chunks(d)) {
                *o = row.iter().zip(wr).map(|(a, b)| a * b).sum();
            }
            act.apply(out);
        });
    y
}

fn rel_l2(approx: &[f64], exact: &[f64]) -> f64 {
    let num: f64 = approx
        .iter()
        .zip(exact)
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    let den: f64 = exact.iter().map(|b| b * b).sum();
    if num == 0.0 {
        0.0
    } else {
        (num / den).sqrt()
    }
}

/// Runs the dense and the compressed stack side by side.
pub fn simulate_stack(cfg: &StackConfig) -> Result<PropagationTrace> {
    cfg.validate()?;
    let d = cfg.width;
    let bs = cfg.format.block_size;
    let base = SeedSpec::new(cfg.seed, 0);
    let std = cfg.std();

    let mut dense = gaussian_vec(cfg.batch * d, base);
    let mut compressed = dense.clone();
    let mut rel = Vec::with_capacity(cfg.depth);
    for layer in 0..cfg.depth {
        let w: Vec<f64> = gaussian_vec(d * d, base.stream(layer as u64 + 1))
            .into_iter()
            .map(|v| v * std)
            .collect();
        let next_dense = forward(&dense, &w, d, cfg.activation);
        compressed = if cfg.compresses(layer) {
            let wt = Tensor::new(vec![d, d], w, bs)?;
            let cw = compose_tensor(&wt, &cfg.format, &cfg.pattern, cfg.order)?.output;
            let qx = quantize_chunks(&compressed, bs, &cfg.format);
            forward(&qx, &cw, d, cfg.activation)
        } else {
            forward(&compressed, &w, d, cfg.activation)
        };
        dense = next_dense;
        rel.push(rel_l2(&compressed, &dense));
    }
    Ok(PropagationTrace {
        order: cfg.order,
        seed: cfg.seed,
        rel_l2: rel,
    })
}

/// One trace per seed, in seed order.
pub fn simulate_seeds(cfg: &StackConfig, seeds: &[u64]) -> Result<Vec<PropagationTrace>> {
    seeds
        .par_iter()
        .map(|&seed| {
            simulate_stack(&StackConfig {
                seed,
                ..cfg.clone()
            })
        })
        .collect()
}

/// Mean of each layer's error across traces.
pub fn mean_trace(traces: &[PropagationTrace]) -> Vec<f64> {
    let Some(first) = traces.first() else {
        return Vec::new();
    };
    let n = traces.len() as f64;
    (0..first.rel_l2.len())
        .map(|i| traces.iter().map(|t| t.rel_l2[i]).sum::<f64>() / n)
        .collect()
}
