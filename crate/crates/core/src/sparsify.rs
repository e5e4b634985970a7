//! Magnitude pruning: N:M structured groups and p% unstructured.
//!
//! Selection keeps exactly `N` elements per group (or exactly
//! `len - round(len * p / 100)` elements for unstructured), ranking by
//! magnitude and breaking ties by position according to [`TieMode`].

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensorcore::ensure_finite;

/// Which of two equal magnitudes counts as larger.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum TieMode {
    /// The lower index wins and is kept.
    #[default]
    KeepEarlier,
    /// The higher index wins and is kept.
    KeepLater,
}

impl FromStr for TieMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "keep_earlier" | "earlier" => Ok(TieMode::KeepEarlier),
            "keep_later" | "later" => Ok(TieMode::KeepLater),
            _ => Err(Error::InvalidPattern(format!("unknown tie mode `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SparsityKind {
    /// Keep `n` of every `m` consecutive elements.
    Nm { n: usize, m: usize },
    /// Prune `round(len * percent / 100)` elements of the whole input.
    Unstructured { percent: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SparsityPattern {
    pub kind: SparsityKind,
    #[serde(default)]
    pub tie_mode: TieMode,
}

impl SparsityPattern {
    pub fn nm(n: usize, m: usize) -> Result<Self> {
        if m == 0 || n > m {
            return Err(Error::InvalidPattern(format!(
                "N:M requires 0 <= N <= M and M >= 1, got {n}:{m}"
            )));
        }
        Ok(Self {
            kind: SparsityKind::Nm { n, m },
            tie_mode: TieMode::default(),
        })
    }

    pub fn unstructured(percent: f64) -> Result<Self> {
        if !(0.0..=100.0).contains(&percent) {
            return Err(Error::InvalidPattern(format!(
                "percent must lie in [0, 100], got {percent}"
            )));
        }
        Ok(Self {
            kind: SparsityKind::Unstructured { percent },
            tie_mode: TieMode::default(),
        })
    }

    /// Prunes nothing.
    pub fn dense() -> Self {
        Self {
            kind: SparsityKind::Unstructured { percent: 0.0 },
            tie_mode: TieMode::default(),
        }
    }

    pub fn with_tie_mode(mut self, tie_mode: TieMode) -> Self {
        self.tie_mode = tie_mode;
        self
    }

    pub fn is_structured(&self) -> bool {
        matches!(self.kind, SparsityKind::Nm { .. })
    }

    /// Number of elements pruned from an input of `len` elements.
    pub fn prune_count(&self, len: usize) -> Result<usize> {
        match self.kind {
            SparsityKind::Nm { n, m } => {
                check_divisible(len, m)?;
                Ok(len / m * (m - n))
            }
            SparsityKind::Unstructured { percent } => {
                let pruned = (len as f64 * percent / 100.0).round() as usize;
                Ok(pruned.min(len))
            }
        }
    }

    /// Checks that the pattern can be applied to `len` elements.
    pub fn check_len(&self, len: usize) -> Result<()> {
        self.prune_count(len).map(|_| ())
    }
}

impl fmt::Display for SparsityPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            SparsityKind::Nm { n, m } => write!(f, "{n}:{m}"),
            SparsityKind::Unstructured { percent } => write!(f, "{percent}%"),
        }
    }
}

impl FromStr for SparsityPattern {
    type Err = Error;

    /// Accepts `"N:M"`, `"p%"` and `"none"`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("none") || s.eq_ignore_ascii_case("dense") {
            return Ok(Self::dense());
        }
        if let Some((n, m)) = s.split_once(':') {
            let parse = |t: &str| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidPattern(format!("bad N:M pattern `{s}`")))
            };
            return Self::nm(parse(n)?, parse(m)?);
        }
        if let Some(p) = s.strip_suffix('%') {
            let percent = p
                .trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidPattern(format!("bad percentage `{s}`")))?;
            return Self::unstructured(percent);
        }
        Err(Error::InvalidPattern(format!(
            "expected `N:M`, `p%` or `none`, got `{s}`"
        )))
    }
}

fn check_divisible(len: usize, m: usize) -> Result<()> {
    if !len.is_multiple_of(m) {
        return Err(Error::Indivisible {
            len,
            divisor: m,
            what: "input length by group size M",
        });
    }
    Ok(())
}

/// Which positions survive pruning.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparsityMask {
    pub keep: Vec<bool>,
}

impl SparsityMask {
    pub fn kept(&self) -> usize {
        self.keep.iter().filter(|&&k| k).count()
    }

    pub fn pruned(&self) -> usize {
        self.keep.len() - self.kept()
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        v.iter()
            .zip(&self.keep)
            .map(|(&x, &k)| if k { x } else { 0.0 })
            .collect()
    }
}

/// Ranks `a` before `b` when `a` should be kept in preference to `b`.
fn rank(v: &[f64], tie: TieMode, a: usize, b: usize) -> Ordering {
    v[b].abs().total_cmp(&v[a].abs()).then_with(|| match tie {
        TieMode::KeepEarlier => a.cmp(&b),
        TieMode::KeepLater => b.cmp(&a),
    })
}

/// Marks the `keep` highest-ranked positions of `v[offset..offset + len]`.
fn mark_top(v: &[f64], offset: usize, len: usize, keep: usize, tie: TieMode, mask: &mut [bool]) {
    if keep == 0 {
        return;
    }
    if keep >= len {
        mask[offset..offset + len]
            .iter_mut()
            .for_each(|k| *k = true);
        return;
    }
    let mut idx: Vec<usize> = (offset..offset + len).collect();
    idx.select_nth_unstable_by(keep - 1, |&a, &b| rank(v, tie, a, b));
    for &i in &idx[..keep] {
        mask[i] = true;
    }
}

/// Computes the keep-mask without touching the values.
pub fn select_mask(v: &[f64], pattern: &SparsityPattern) -> Result<SparsityMask> {
    ensure_finite(v)?;
    let pruned = pattern.prune_count(v.len())?;
    let mut keep = vec![false; v.len()];
    match pattern.kind {
        SparsityKind::Nm { n, m } => {
            for start in (0..v.len()).step_by(m) {
                mark_top(v, start, m, n, pattern.tie_mode, &mut keep);
            }
        }
        SparsityKind::Unstructured { .. } => {
            mark_top(v, 0, v.len(), v.len() - pruned, pattern.tie_mode, &mut keep);
        }
    }
    Ok(SparsityMask { keep })
}

/// Zeroes the pruned elements; kept elements are unchanged.
pub fn sparsify(v: &[f64], pattern: &SparsityPattern) -> Result<(Vec<f64>, SparsityMask)> {
    let mask = select_mask(v, pattern)?;
    Ok((mask.apply(v), mask))
}

/// `v - sparsify(v)`: the original value at pruned positions, zero elsewhere.
pub fn sparsity_error(v: &[f64], pattern: &SparsityPattern) -> Result<Vec<f64>> {
    let mask = select_mask(v, pattern)?;
    Ok(v.iter()
        .zip(&mask.keep)
        .map(|(&x, &k)| if k { 0.0 } else { x })
        .collect())
}
