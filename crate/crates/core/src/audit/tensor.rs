//! Block-level orthogonality audit of the two composition orders.
//!
//! For each block the audit records the `p`-norms of `eps_q`, `eps_s`,
//! `eps_{q∘s}` and `eps_{s∘q}` and checks:
//!
//! * sparsify-first never adds error:
//!   `|eps_{q∘s}|_p <= |eps_q|_p + |eps_s|_p`;
//! * quantize-first adds at most `2 * step * |1_k|_p` where `k` is the number
//!   of pruned elements in the block (checked in L1 and at `p`);
//! * `|eps_{q∘s}|_1 <= |eps_{s∘q}|_1`.
//!
//! The last two rely on quantization being monotone inside one block, so they
//! are only evaluated when sparsity groups never span blocks: N:M patterns,
//! or any pattern on a single-block tensor.

use serde::{Deserialize, Serialize};

use super::{holds, ORDER_TOL, THEOREM_TOL};
use crate::compose::{compose_tensor, CompositionResult, Order};
use crate::error::Result;
use crate::quantize::{block_scale, step_bound, QuantFormat};
use crate::sparsify::SparsityPattern;
use crate::tensorcore::{lp_norm_unchecked, NormKind, Tensor};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockAudit {
    pub block: usize,
    pub scale: f64,
    pub step: f64,
    /// Elements pruned from this block by sparsity on the original input.
    pub pruned: usize,
    /// Norms at the audit's `p`.
    pub eps_q: f64,
    pub eps_s: f64,
    pub eps_qs: f64,
    pub eps_sq: f64,
    pub eps_q_l1: f64,
    pub eps_s_l1: f64,
    pub eps_qs_l1: f64,
    pub eps_sq_l1: f64,
    /// `|eps_q|_1 + |eps_s|_1 + 2 * step * pruned`.
    pub thm37_bound: f64,
    /// `|eps_q|_p + |eps_s|_p + 2 * step * pruned^(1/p)`.
    pub thm37_bound_p: f64,
    pub thm35_holds: bool,
    pub thm37_holds: Option<bool>,
    pub l1_order_holds: Option<bool>,
    /// Largest elementwise gap in `eps_c = eps_q + eps_s + eps_correction`
    /// over both orders.
    pub identity_residual: f64,
}

impl BlockAudit {
    /// Error that `s∘q` adds on top of the two standalone errors (at `p`).
    pub fn additional_sq(&self) -> f64 {
        self.eps_sq - (self.eps_q + self.eps_s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TensorAudit {
    pub p: NormKind,
    pub pattern: SparsityPattern,
    pub records: Vec<BlockAudit>,
    pub max_eps_qs: f64,
    pub max_eps_sq: f64,
    pub max_additional_sq: f64,
    pub max_identity_residual: f64,
    pub thm35_violations: usize,
    pub thm37_violations: usize,
    pub l1_order_violations: usize,
    /// Blocks on which the quantize-first bound and L1 order were evaluated.
    pub thm37_evaluated: usize,
    /// Blocks where `s∘q` strictly exceeded `|eps_q|_p + |eps_s|_p`.
    pub sq_excess_blocks: usize,
}

impl TensorAudit {
    pub fn total_violations(&self) -> usize {
        self.thm35_violations + self.thm37_violations + self.l1_order_violations
    }
}

struct BlockErrors<'a> {
    x: &'a [f64],
    /// Keep-mask of sparsity applied to the original input.
    keep: &'a [bool],
    eps_q: &'a [f64],
    eps_s: &'a [f64],
    eps_qs: &'a [f64],
    eps_sq: &'a [f64],
    identity_residual: f64,
}

fn evaluate(
    block: usize,
    e: BlockErrors<'_>,
    format: &QuantFormat,
    p: NormKind,
    order_theorems: bool,
) -> BlockAudit {
    let scale = block_scale(e.x);
    let step = step_bound(format, scale);
    let pruned = e.keep.iter().filter(|&&k| !k).count();
    let norm = |v: &[f64]| lp_norm_unchecked(v, p);
    let l1 = |v: &[f64]| lp_norm_unchecked(v, NormKind::L1);

    let (eps_q, eps_s, eps_qs, eps_sq) =
        (norm(e.eps_q), norm(e.eps_s), norm(e.eps_qs), norm(e.eps_sq));
    let (eps_q_l1, eps_s_l1, eps_qs_l1, eps_sq_l1) =
        (l1(e.eps_q), l1(e.eps_s), l1(e.eps_qs), l1(e.eps_sq));

    let k = pruned as f64;
    let thm37_bound = eps_q_l1 + eps_s_l1 + 2.0 * step * k;
    let thm37_bound_p = eps_q + eps_s + 2.0 * step * k.powf(1.0 / p.p());

    let thm35_holds = holds(eps_qs, eps_q + eps_s, THEOREM_TOL);
    let (thm37_holds, l1_order_holds) = if order_theorems {
        (
            Some(
                holds(eps_sq_l1, thm37_bound, THEOREM_TOL)
                    && holds(eps_sq, thm37_bound_p, THEOREM_TOL),
            ),
            Some(holds(eps_qs_l1, eps_sq_l1, ORDER_TOL)),
        )
    } else {
        (None, None)
    };

    BlockAudit {
        block,
        scale,
        step,
        pruned,
        eps_q,
        eps_s,
        eps_qs,
        eps_sq,
        eps_q_l1,
        eps_s_l1,
        eps_qs_l1,
        eps_sq_l1,
        thm37_bound,
        thm37_bound_p,
        thm35_holds,
        thm37_holds,
        l1_order_holds,
        identity_residual: e.identity_residual,
    }
}

/// Audits every block of `tensor` under both composition orders.
pub fn audit_tensor(
    tensor: &Tensor,
    format: &QuantFormat,
    pattern: &SparsityPattern,
    p: NormKind,
) -> Result<TensorAudit> {
    let mut audits = audit_tensor_norms(tensor, format, pattern, &[p])?;
    Ok(audits.pop().expect("one norm"))
}

/// [`audit_tensor`] at several norms, composing each order only once.
pub fn audit_tensor_norms(
    tensor: &Tensor,
    format: &QuantFormat,
    pattern: &SparsityPattern,
    norms: &[NormKind],
) -> Result<Vec<TensorAudit>> {
    let qs = compose_tensor(tensor, format, pattern, Order::SThenQ)?;
    let sq = compose_tensor(tensor, format, pattern, Order::QThenS)?;
    let order_theorems = pattern.is_structured() || tensor.num_blocks() == 1;
    let residual = |r: &CompositionResult, i: usize| {
        (r.eps_composition[i] - (r.eps_q[i] + r.eps_s[i] + r.eps_correction[i])).abs()
    };

    let bs = tensor.block_size();
    let residuals: Vec<f64> = tensor
        .blocks()
        .enumerate()
        .map(|(b, x)| {
            (b * bs..b * bs + x.len())
                .map(|i| residual(&qs, i).max(residual(&sq, i)))
                .fold(0.0, f64::max)
        })
        .collect();

    Ok(norms
        .iter()
        .map(|&p| {
            let records = tensor
                .blocks()
                .enumerate()
                .map(|(b, x)| {
                    let r = b * bs..b * bs + x.len();
                    let errors = BlockErrors {
                        x,
                        keep: &qs.keep[r.clone()],
                        eps_q: &qs.eps_q[r.clone()],
                        eps_s: &qs.eps_s[r.clone()],
                        eps_qs: &qs.eps_composition[r.clone()],
                        eps_sq: &sq.eps_composition[r],
                        identity_residual: residuals[b],
                    };
                    evaluate(b, errors, format, p, order_theorems)
                })
                .collect();
            summarize(records, *pattern, p)
        })
        .collect())
}

/// Audits a single block; all three checks apply.
pub fn audit_block(
    block: &[f64],
    format: &QuantFormat,
    pattern: &SparsityPattern,
    p: NormKind,
) -> Result<BlockAudit> {
    let mut records = audit_block_norms(block, format, pattern, &[p])?;
    Ok(records.pop().expect("one norm"))
}

/// [`audit_block`] at several norms; one record per norm, in order.
pub fn audit_block_norms(
    block: &[f64],
    format: &QuantFormat,
    pattern: &SparsityPattern,
    norms: &[NormKind],
) -> Result<Vec<BlockAudit>> {
    let tensor = Tensor::from_block(block.to_vec())?;
    let audits = audit_tensor_norms(&tensor, format, pattern, norms)?;
    Ok(audits
        .into_iter()
        .map(|a| a.records.into_iter().next().expect("one block"))
        .collect())
}

fn summarize(records: Vec<BlockAudit>, pattern: SparsityPattern, p: NormKind) -> TensorAudit {
    let max = |f: fn(&BlockAudit) -> f64| records.iter().map(f).fold(0.0_f64, f64::max);
    let violations =
        |f: fn(&BlockAudit) -> Option<bool>| records.iter().filter(|r| f(r) == Some(false)).count();
    TensorAudit {
        p,
        pattern,
        max_eps_qs: max(|r| r.eps_qs),
        max_eps_sq: max(|r| r.eps_sq),
        max_additional_sq: max(|r| r.additional_sq()),
        max_identity_residual: max(|r| r.identity_residual),
        thm35_violations: violations(|r| Some(r.thm35_holds)),
        thm37_violations: violations(|r| r.thm37_holds),
        l1_order_violations: violations(|r| r.l1_order_holds),
        thm37_evaluated: records.iter().filter(|r| r.thm37_holds.is_some()).count(),
        sq_excess_blocks: records.iter().filter(|r| r.additional_sq() > 0.0).count(),
        records,
    }
}
