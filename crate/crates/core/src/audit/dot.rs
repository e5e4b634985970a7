//! Dot-product error decomposition.
//!
//! Activations `x` are only quantized; weights `w` go through the full
//! composition `c`. The composed error splits exactly as
//!
//! ```text
//! <x,w> - <q(x), c(w)> = <x, eps_s(w)>              (eps_s_dot)
//!                      + <x,w> - <q(x), q(w)>       (eps_q_dot)
//!                      + <q(x), eps_correction(w)>  (eps_t)
//!                      - <eps_q(x), eps_s(w)>       (eps_i)
//! ```
//!
//! and the deviation is the triangle-inequality bound divided by the actual
//! error, which can never drop below 1.

use serde::{Deserialize, Serialize};

use crate::compose::{compose, Order};
use crate::error::{Error, Result};
use crate::quantize::{quantize_block, QuantFormat};
use crate::sparsify::SparsityPattern;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DotAudit {
    pub order: Order,
    /// `<x, w>`.
    pub dot: f64,
    /// `<x,w> - <q(x), c(w)>`.
    pub eps_total: f64,
    /// `<x, eps_s(w)>`.
    pub eps_s_dot: f64,
    /// `<x,w> - <q(x), q(w)>`.
    pub eps_q_dot: f64,
    /// `<q(x), eps_correction(w)>`.
    pub eps_t: f64,
    /// `<eps_q(x), eps_s(w)>`.
    pub eps_i: f64,
    /// `None` when `eps_total == 0`.
    pub deviation: Option<f64>,
}

impl DotAudit {
    /// `|eps_s_dot| + |eps_q_dot| + |eps_t| + |eps_i|`.
    pub fn bound(&self) -> f64 {
        self.eps_s_dot.abs() + self.eps_q_dot.abs() + self.eps_t.abs() + self.eps_i.abs()
    }

    pub fn identity_residual(&self) -> f64 {
        (self.eps_total - (self.eps_s_dot + self.eps_q_dot + self.eps_t - self.eps_i)).abs()
    }

    /// True when the composed error beats the sum of the standalone errors.
    pub fn exceeds_standalone(&self) -> bool {
        self.eps_total.abs() > self.eps_s_dot.abs() + self.eps_q_dot.abs()
    }

    /// `[|eps_s_dot|, |eps_q_dot|, |eps_t|, |eps_i|]` normalized to sum to 1.
    pub fn term_shares(&self) -> Option<[f64; 4]> {
        let total = self.bound();
        if total == 0.0 {
            return None;
        }
        Some([
            self.eps_s_dot.abs() / total,
            self.eps_q_dot.abs() / total,
            self.eps_t.abs() / total,
            self.eps_i.abs() / total,
        ])
    }

    pub fn deviation_or_inf(&self) -> f64 {
        self.deviation.unwrap_or(f64::INFINITY)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Decomposes the dot-product error of quantized `x` against composed `w`.
pub fn audit_dot(
    x: &[f64],
    w: &[f64],
    format: &QuantFormat,
    pattern: &SparsityPattern,
    order: Order,
) -> Result<DotAudit> {
    if x.len() != w.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: w.len(),
        });
    }
    let qx = quantize_block(x, format)?;
    let comp = compose(w, format, pattern, order)?;
    let qw: Vec<f64> = w.iter().zip(&comp.eps_q).map(|(a, e)| a - e).collect();
    let eps_qx: Vec<f64> = x.iter().zip(&qx).map(|(a, b)| a - b).collect();

    let xw = dot(x, w);
    let eps_total = xw - dot(&qx, &comp.output);
    let eps_s_dot = dot(x, &comp.eps_s);
    let eps_q_dot = xw - dot(&qx, &qw);
    let eps_t = dot(&qx, &comp.eps_correction);
    let eps_i = dot(&eps_qx, &comp.eps_s);

    let mut audit = DotAudit {
        order,
        dot: xw,
        eps_total,
        eps_s_dot,
        eps_q_dot,
        eps_t,
        eps_i,
        deviation: None,
    };
    if eps_total != 0.0 {
        audit.deviation = Some(audit.bound() / eps_total.abs());
    }
    Ok(audit)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn worked_counterexample() {
        let f = QuantFormat::preset("HBFP4-paper").unwrap();
        let p = "1:2".parse().unwrap();
        for order in Order::BOTH {
            let a = audit_dot(&[1.0, 1.0], &[0.6, 1.3], &f, &p, order).unwrap();
            assert!(close(a.eps_total, 0.65), "{a:?}");
            assert!(close(a.eps_q_dot, 0.025));
            assert!(close(a.eps_s_dot, 0.6));
            assert!(close(a.eps_t, 0.025));
            assert!(close(a.eps_i, 0.0));
            assert!(close(a.deviation.unwrap(), 1.0));
            assert!(a.exceeds_standalone());
            assert!(a.identity_residual() < 1e-12);
        }
    }

    #[test]
    fn zero_blocks_have_undefined_deviation() {
        let f = QuantFormat::preset("HBFP6-appendix").unwrap();
        let a = audit_dot(
            &[0.0; 4],
            &[0.0; 4],
            &f,
            &"2:4".parse().unwrap(),
            Order::QThenS,
        )
        .unwrap();
        assert_eq!(a.eps_total, 0.0);
        assert_eq!(a.bound(), 0.0);
        assert_eq!(a.deviation, None);
        assert_eq!(a.deviation_or_inf(), f64::INFINITY);
        assert_eq!(a.term_shares(), None);
    }

    #[test]
    fn length_mismatch_is_rejected() {
        let f = QuantFormat::preset("INT8").unwrap();
        let err = audit_dot(
            &[1.0, 2.0],
            &[1.0],
            &f,
            &"1:1".parse().unwrap(),
            Order::SThenQ,
        );
        assert_eq!(err, Err(Error::LengthMismatch { left: 2, right: 1 }));
    }
}
