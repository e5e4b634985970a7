//! Compositions `q∘s` (sparsify, then quantize) and `s∘q` (quantize, then
//! sparsify), with the error decomposition
//! `eps_composition = eps_q + eps_s + eps_correction`.
//!
//! `eps_q` and `eps_s` are always the errors of each transformation applied
//! alone to the original input, never to the intermediate result.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantize::{quantize_block_unchecked, quantize_chunks, QuantFormat};
use crate::sparsify::{select_mask, SparsityKind, SparsityPattern};
use crate::tensorcore::{ensure_finite, Tensor};

/// Which transformation runs first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Order {
    /// Sparsify, then quantize: `q(s(x))`.
    SThenQ,
    /// Quantize, then sparsify: `s(q(x))`.
    QThenS,
}

impl Order {
    pub const BOTH: [Order; 2] = [Order::SThenQ, Order::QThenS];

    pub fn as_str(self) -> &'static str {
        match self {
            Order::SThenQ => "s_then_q",
            Order::QThenS => "q_then_s",
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Order {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sq" | "s_then_q" | "s-then-q" | "s->q" => Ok(Order::SThenQ),
            "qs" | "q_then_s" | "q-then-s" | "q->s" => Ok(Order::QThenS),
            _ => Err(Error::InvalidConfig(format!(
                "unknown order `{s}` (expected sq or qs)"
            ))),
        }
    }
}

/// Output of a composition together with its error vectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompositionResult {
    pub order: Order,
    pub output: Vec<f64>,
    /// `x - c(x)`.
    pub eps_composition: Vec<f64>,
    /// `x - q(x)`.
    pub eps_q: Vec<f64>,
    /// `x - s(x)`.
    pub eps_s: Vec<f64>,
    /// `eps_composition - eps_q - eps_s`.
    pub eps_correction: Vec<f64>,
    /// Keep-mask applied by the sparsity step (on `x` or on `q(x)`).
    pub keep: Vec<bool>,
}

impl CompositionResult {
    /// Largest elementwise gap in `eps_composition = eps_q + eps_s + eps_correction`.
    pub fn identity_residual(&self) -> f64 {
        self.eps_composition
            .iter()
            .zip(&self.eps_q)
            .zip(self.eps_s.iter().zip(&self.eps_correction))
            .map(|((c, q), (s, t))| (c - (q + s + t)).abs())
            .fold(0.0, f64::max)
    }
}

fn compose_with<Q>(
    v: &[f64],
    quantize: Q,
    pattern: &SparsityPattern,
    order: Order,
) -> Result<CompositionResult>
where
    Q: Fn(&[f64]) -> Vec<f64>,
{
    let q = quantize(v);
    let s_mask = select_mask(v, pattern)?;
    let (output, keep) = match order {
        Order::SThenQ => (quantize(&s_mask.apply(v)), s_mask.keep.clone()),
        Order::QThenS => {
            let mask = select_mask(&q, pattern)?;
            (mask.apply(&q), mask.keep)
        }
    };
    let diff = |other: &[f64]| -> Vec<f64> { v.iter().zip(other).map(|(x, y)| x - y).collect() };
    let eps_composition = diff(&output);
    let eps_q = diff(&q);
    let eps_s: Vec<f64> = v
        .iter()
        .zip(&s_mask.keep)
        .map(|(&x, &k)| if k { 0.0 } else { x })
        .collect();
    let eps_correction = eps_composition
        .iter()
        .zip(&eps_q)
        .zip(&eps_s)
        .map(|((c, q), s)| c - q - s)
        .collect();
    Ok(CompositionResult {
        order,
        output,
        eps_composition,
        eps_q,
        eps_s,
        eps_correction,
        keep,
    })
}

/// Composes sparsity and quantization on a single block.
pub fn compose(
    v: &[f64],
    format: &QuantFormat,
    pattern: &SparsityPattern,
    order: Order,
) -> Result<CompositionResult> {
    if v.is_empty() {
        return Err(Error::Empty("block"));
    }
    ensure_finite(v)?;
    pattern.check_len(v.len())?;
    compose_with(v, |x| quantize_block_unchecked(x, format), pattern, order)
}

/// Composes over a whole tensor: quantization is per block, unstructured
/// sparsity selects over the full tensor (on `q(x)` for `QThenS`), and N:M
/// groups must tile each block.
pub fn compose_tensor(
    tensor: &Tensor,
    format: &QuantFormat,
    pattern: &SparsityPattern,
    order: Order,
) -> Result<CompositionResult> {
    check_groups_tile_blocks(tensor, pattern)?;
    let bs = tensor.block_size();
    compose_with(
        tensor.data(),
        |x| quantize_chunks(x, bs, format),
        pattern,
        order,
    )
}

pub(crate) fn check_groups_tile_blocks(tensor: &Tensor, pattern: &SparsityPattern) -> Result<()> {
    if let SparsityKind::Nm { m, .. } = pattern.kind {
        if !tensor.block_size().is_multiple_of(m) {
            return Err(Error::Indivisible {
                len: tensor.block_size(),
                divisor: m,
                what: "block size by group size M",
            });
        }
    }
    pattern.check_len(tensor.len())
}

/// The correction vector `eps_correction` of [`compose`].
pub fn correction_vector(
    v: &[f64],
    format: &QuantFormat,
    pattern: &SparsityPattern,
    order: Order,
) -> Result<Vec<f64>> {
    compose(v, format, pattern, order).map(|r| r.eps_correction)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensorcore::{lp_norm, NormKind};

    fn fmt(name: &str) -> QuantFormat {
        QuantFormat::preset(name).unwrap()
    }

    fn pat(s: &str) -> SparsityPattern {
        s.parse().unwrap()
    }

    fn l1(v: &[f64]) -> f64 {
        lp_norm(v, NormKind::L1).unwrap()
    }

    #[test]
    fn quantize_first_collision_adds_error() {
        let r = compose(&[3.9, 4.0], &fmt("INT4"), &pat("1:2"), Order::QThenS).unwrap();
        assert_eq!(r.output, vec![4.0, 0.0]);
        assert!((l1(&r.eps_composition) - 4.1).abs() < 1e-12);
        assert!((l1(&r.eps_q) + l1(&r.eps_s) - 4.0).abs() < 1e-12);
        // eps_c = (-0.1, 4.0), eps_q = (-0.1, 0), eps_s = (3.9, 0)
        let corr = &r.eps_correction;
        assert!((corr[0] + 3.9).abs() < 1e-12, "{corr:?}");
        assert!((corr[1] - 4.0).abs() < 1e-12, "{corr:?}");
    }

    #[test]
    fn sparsify_first_attains_equality() {
        for name in ["HBFP4-paper", "HBFP4-appendix"] {
            let r = compose(&[4.0, 4.1], &fmt(name), &pat("1:2"), Order::SThenQ).unwrap();
            assert_eq!(r.output, vec![0.0, 4.0]);
            assert!((l1(&r.eps_s) - 4.0).abs() < 1e-12);
            assert!((l1(&r.eps_q) - 0.1).abs() < 1e-12);
            assert!((l1(&r.eps_composition) - 4.1).abs() < 1e-12);
        }
    }

    #[test]
    fn both_orders_agree_without_collisions() {
        for order in Order::BOTH {
            let r = compose(&[0.6, 1.3], &fmt("HBFP4-paper"), &pat("1:2"), order).unwrap();
            assert_eq!(r.output, vec![0.0, 1.25]);
            assert!((r.eps_correction[0] - 0.025).abs() < 1e-12);
            assert!(r.eps_correction[1].abs() < 1e-12);
            assert!(r.identity_residual() < 1e-15);
        }
    }

    #[test]
    fn correction_is_zero_when_pruned_entries_are_zero() {
        let v = [0.0, 1.7, 0.0, -0.3];
        let c = correction_vector(&v, &fmt("HBFP6-appendix"), &pat("2:4"), Order::SThenQ).unwrap();
        assert_eq!(c, vec![0.0; 4]);
    }

    #[test]
    fn s_then_q_correction_is_negated_quant_error_on_pruned() {
        let v = [0.31, -1.7, 0.93, 0.05, 2.2, -0.41, 0.77, 1.01];
        let f = fmt("HBFP4-appendix");
        let r = compose(&v, &f, &pat("2:4"), Order::SThenQ).unwrap();
        for i in 0..v.len() {
            let expected = if r.keep[i] { 0.0 } else { -r.eps_q[i] };
            assert!((r.eps_correction[i] - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn tensor_unstructured_selects_globally() {
        // block 0 holds the small values; 50% prunes all of block 0
        let t = Tensor::new(vec![2, 2], vec![0.1, -0.2, 3.0, 2.0], 2).unwrap();
        let r = compose_tensor(&t, &fmt("HBFP8-paper"), &pat("50%"), Order::SThenQ).unwrap();
        assert_eq!(r.keep, vec![false, false, true, true]);
        assert_eq!(&r.output[..2], &[0.0, 0.0]);
    }

    #[test]
    fn tensor_groups_must_tile_blocks() {
        let t = Tensor::new(vec![6], vec![1.0; 6], 6).unwrap();
        assert!(compose_tensor(&t, &fmt("INT8"), &pat("2:4"), Order::SThenQ).is_err());
    }

    #[test]
    fn order_parsing() {
        assert_eq!("sq".parse::<Order>().unwrap(), Order::SThenQ);
        assert_eq!("Q->S".parse::<Order>().unwrap(), Order::QThenS);
        assert!("both".parse::<Order>().is_err());
    }
}
