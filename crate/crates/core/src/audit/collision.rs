//! Counts how many distinct values quantization merges together.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::quantize::{quantize_tensor, QuantFormat};
use crate::tensorcore::Tensor;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CollisionReport {
    pub tensor_unique_before: usize,
    pub tensor_unique_after: usize,
    /// `unique(block) - unique(q(block))` for each block.
    pub per_block_reduction: Vec<usize>,
    /// Largest per-block reduction divided by that block's length.
    pub max_block_reduction_fraction: f64,
    pub blocks_with_reduction: usize,
    pub mean_block_reduction: f64,
}

impl CollisionReport {
    pub fn fraction_of_blocks_with_reduction(&self) -> f64 {
        if self.per_block_reduction.is_empty() {
            return 0.0;
        }
        self.blocks_with_reduction as f64 / self.per_block_reduction.len() as f64
    }
}

fn key(x: f64) -> u64 {
    (x + 0.0).to_bits()
}

fn unique(values: &[f64]) -> usize {
    values.iter().map(|&x| key(x)).collect::<HashSet<_>>().len()
}

/// Exact unique counts (bit-pattern equality, `-0.0 == 0.0`) before and after
/// quantizing each block of `tensor`.
pub fn collision_report(tensor: &Tensor, format: &QuantFormat) -> CollisionReport {
    let quantized = quantize_tensor(tensor, format);
    let bs = tensor.block_size();
    let per_block: Vec<(usize, usize)> = tensor
        .data()
        .par_chunks(bs)
        .zip(quantized.par_chunks(bs))
        .map(|(x, q)| (unique(x) - unique(q), x.len()))
        .collect();

    let max_block_reduction_fraction = per_block
        .iter()
        .map(|&(r, len)| r as f64 / len as f64)
        .fold(0.0, f64::max);
    let per_block_reduction: Vec<usize> = per_block.into_iter().map(|(r, _)| r).collect();
    let blocks_with_reduction = per_block_reduction.iter().filter(|&&r| r > 0).count();
    let mean_block_reduction = if per_block_reduction.is_empty() {
        0.0
    } else {
        per_block_reduction.iter().sum::<usize>() as f64 / per_block_reduction.len() as f64
    };

    CollisionReport {
        tensor_unique_before: unique(tensor.data()),
        tensor_unique_after: unique(&quantized),
        per_block_reduction,
        max_block_reduction_fraction,
        blocks_with_reduction,
        mean_block_reduction,
    }
}
