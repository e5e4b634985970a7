//! Monte Carlo over random activation/weight block pairs: how tight is the
//! dot-product error bound, and which terms make it up.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::dot::{audit_dot, DotAudit};
use crate::compose::Order;
use crate::error::{Error, Result};
use crate::quantize::QuantFormat;
use crate::sparsify::SparsityPattern;
use crate::tensorcore::{gaussian_vec, SeedSpec};

/// Ascending bin edges; bin `i` is `[edges[i], edges[i + 1])`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistogramSpec {
    pub edges: Vec<f64>,
}

impl HistogramSpec {
    pub fn uniform(lo: f64, hi: f64, bins: usize) -> Result<Self> {
        if bins == 0 || !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "histogram needs bins >= 1 and finite lo < hi, got {bins} bins over [{lo}, {hi}]"
            )));
        }
        let width = (hi - lo) / bins as f64;
        let mut edges: Vec<f64> = (0..bins).map(|i| lo + width * i as f64).collect();
        edges.push(hi);
        Ok(Self { edges })
    }

    pub fn from_edges(edges: Vec<f64>) -> Result<Self> {
        if edges.len() < 2
            || edges.windows(2).any(|w| !(w[0] < w[1]))
            || edges.iter().any(|e| !e.is_finite())
        {
            return Err(Error::InvalidConfig(
                "histogram edges must be finite and strictly ascending".into(),
            ));
        }
        Ok(Self { edges })
    }
}

impl Default for HistogramSpec {
    /// Half-unit bins over `[1, 10]`.
    fn default() -> Self {
        Self::uniform(1.0, 10.0, 18).expect("valid default")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<usize>,
    pub underflow: usize,
    pub overflow: usize,
    /// Samples with zero composed error (deviation undefined).
    pub undefined: usize,
}

impl Histogram {
    pub fn build(spec: &HistogramSpec, values: impl IntoIterator<Item = Option<f64>>) -> Self {
        let edges = spec.edges.clone();
        let mut counts = vec![0; edges.len() - 1];
        let (mut underflow, mut overflow, mut undefined) = (0, 0, 0);
        for v in values {
            let Some(v) = v else {
                undefined += 1;
                continue;
            };
            if v < edges[0] {
                underflow += 1;
            } else if v >= edges[edges.len() - 1] {
                overflow += 1;
            } else {
                // first edge strictly greater than v, minus one
                let bin = edges.partition_point(|&e| e <= v) - 1;
                counts[bin] += 1;
            }
        }
        Self {
            edges,
            counts,
            underflow,
            overflow,
            undefined,
        }
    }
}

/// Mean normalized share of each bound term over a subset of samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TermShares {
    pub samples: usize,
    pub eps_s_dot: f64,
    pub eps_q_dot: f64,
    pub eps_t: f64,
    pub eps_i: f64,
}

impl TermShares {
    pub fn mean_over<'a>(audits: impl IntoIterator<Item = &'a DotAudit>) -> Self {
        let mut sums = [0.0; 4];
        let mut samples = 0;
        for shares in audits.into_iter().filter_map(DotAudit::term_shares) {
            samples += 1;
            for (s, v) in sums.iter_mut().zip(shares) {
                *s += v;
            }
        }
        let n = samples.max(1) as f64;
        Self {
            samples,
            eps_s_dot: sums[0] / n,
            eps_q_dot: sums[1] / n,
            eps_t: sums[2] / n,
            eps_i: sums[3] / n,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviationConfig {
    pub count: usize,
    pub n: usize,
    pub format: QuantFormat,
    pub pattern: SparsityPattern,
    pub order: Order,
    pub seed: u64,
    pub histogram: HistogramSpec,
    /// Samples below this deviation feed the term-share means.
    pub low_deviation_cutoff: f64,
}

impl DeviationConfig {
    pub fn new(
        count: usize,
        n: usize,
        format: QuantFormat,
        pattern: SparsityPattern,
        order: Order,
        seed: u64,
    ) -> Self {
        Self {
            count,
            n,
            format,
            pattern,
            order,
            seed,
            histogram: HistogramSpec::default(),
            low_deviation_cutoff: 1.05,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviationExperiment {
    pub order: Order,
    pub samples: Vec<DotAudit>,
    pub histogram: Histogram,
    /// Shares over samples with deviation below the cutoff.
    pub low_deviation_shares: TermShares,
    /// Shares over every sample with a defined deviation.
    pub all_shares: TermShares,
    pub min_deviation: Option<f64>,
    pub median_deviation: Option<f64>,
    pub max_identity_residual: f64,
}

/// Sample `k` draws the activation block from stream `2k` and the weight
/// block from stream `2k + 1` of `seed`, so both orders see the same data.
pub fn sample_blocks(n: usize, seed: u64, k: usize) -> (Vec<f64>, Vec<f64>) {
    let base = SeedSpec::new(seed, 0);
    let x = gaussian_vec(n, base.stream(2 * k as u64));
    let w = gaussian_vec(n, base.stream(2 * k as u64 + 1));
    (x, w)
}

pub fn deviation_experiment(cfg: &DeviationConfig) -> Result<DeviationExperiment> {
    if cfg.count == 0 || cfg.n == 0 {
        return Err(Error::InvalidConfig("count and n must be positive".into()));
    }
    cfg.pattern.check_len(cfg.n)?;
    let samples: Vec<DotAudit> = (0..cfg.count)
        .into_par_iter()
        .map(|k| {
            let (x, w) = sample_blocks(cfg.n, cfg.seed, k);
            audit_dot(&x, &w, &cfg.format, &cfg.pattern, cfg.order)
        })
        .collect::<Result<_>>()?;

    let histogram = Histogram::build(&cfg.histogram, samples.iter().map(|a| a.deviation));
    let low = samples
        .iter()
        .filter(|a| a.deviation.is_some_and(|d| d < cfg.low_deviation_cutoff));
    let low_deviation_shares = TermShares::mean_over(low);
    let all_shares = TermShares::mean_over(samples.iter().filter(|a| a.deviation.is_some()));

    let mut defined: Vec<f64> = samples.iter().filter_map(|a| a.deviation).collect();
    defined.sort_by(f64::total_cmp);
    let min_deviation = defined.first().copied();
    let median_deviation = (!defined.is_empty()).then(|| defined[defined.len() / 2]);
    let max_identity_residual = samples
        .iter()
        .map(DotAudit::identity_residual)
        .fold(0.0, f64::max);

    Ok(DeviationExperiment {
        order: cfg.order,
        samples,
        histogram,
        low_deviation_shares,
        all_shares,
        min_deviation,
        median_deviation,
        max_identity_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn histogram_binning() {
        let spec = HistogramSpec::uniform(1.0, 3.0, 2).unwrap();
        let h = Histogram::build(
            &spec,
            [Some(0.5), Some(1.0), Some(1.99), Some(2.0), Some(3.0), None],
        );
        assert_eq!(h.counts, vec![2, 1]);
        assert_eq!((h.underflow, h.overflow, h.undefined), (1, 1, 1));
        assert!(HistogramSpec::uniform(2.0, 1.0, 3).is_err());
        assert!(HistogramSpec::from_edges(vec![1.0, 1.0]).is_err());
    }

    #[test]
    fn experiment_is_deterministic() {
        let f = QuantFormat::preset("HBFP6-appendix").unwrap();
        let cfg = DeviationConfig::new(50, 64, f, "2:4".parse().unwrap(), Order::QThenS, 9);
        let a = deviation_experiment(&cfg).unwrap();
        let b = deviation_experiment(&cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.samples.len(), 50);
        assert!(a.min_deviation.unwrap() >= 1.0 - 1e-9);
    }

    #[test]
    fn both_orders_share_blocks() {
        let (x1, w1) = sample_blocks(8, 3, 5);
        let (x2, w2) = sample_blocks(8, 3, 5);
        assert_eq!((x1.clone(), w1.clone()), (x2, w2));
        assert_ne!(x1, w1);
    }
}
