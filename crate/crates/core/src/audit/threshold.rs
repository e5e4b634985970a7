//! Metric-level orthogonality threshold: the baseline metric plus the
//! degradation each compression method causes on its own.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Direction {
    /// Perplexity-like metrics.
    LowerIsBetter,
    /// Accuracy-like metrics.
    HigherIsBetter,
}

impl FromStr for Direction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "lower_is_better" | "lower" => Ok(Direction::LowerIsBetter),
            "higher_is_better" | "higher" => Ok(Direction::HigherIsBetter),
            _ => Err(Error::InvalidConfig(format!(
                "unknown direction `{s}` (expected lower or higher)"
            ))),
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::LowerIsBetter => "LOWER_IS_BETTER",
            Direction::HigherIsBetter => "HIGHER_IS_BETTER",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    /// The combined model does better than the threshold.
    Beats,
    /// The combined model reaches or passes the threshold: non-orthogonal.
    Violates,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Beats => "BEATS",
            Verdict::Violates => "VIOLATES",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdReport {
    pub em_base: f64,
    pub em_q: f64,
    pub em_s: f64,
    pub err_q: f64,
    pub err_s: f64,
    pub threshold: f64,
    pub direction: Direction,
    pub em_combined: Option<f64>,
    pub verdict: Option<Verdict>,
}

impl ThresholdReport {
    pub fn judge(&self, em_combined: f64) -> Verdict {
        let violates = match self.direction {
            Direction::LowerIsBetter => em_combined >= self.threshold,
            Direction::HigherIsBetter => em_combined <= self.threshold,
        };
        if violates {
            Verdict::Violates
        } else {
            Verdict::Beats
        }
    }

    pub fn with_combined(mut self, em_combined: f64) -> Result<Self> {
        if !em_combined.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "combined metric must be finite, got {em_combined}"
            )));
        }
        self.em_combined = Some(em_combined);
        self.verdict = Some(self.judge(em_combined));
        Ok(self)
    }
}

/// `em_base + (em_q - em_base) + (em_s - em_base)`.
pub fn orthogonality_threshold(
    em_base: f64,
    em_q: f64,
    em_s: f64,
    direction: Direction,
) -> Result<ThresholdReport> {
    for (name, v) in [("em_base", em_base), ("em_q", em_q), ("em_s", em_s)] {
        if !v.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "{name} must be finite, got {v}"
            )));
        }
    }
    let err_q = em_q - em_base;
    let err_s = em_s - em_base;
    Ok(ThresholdReport {
        em_base,
        em_q,
        em_s,
        err_q,
        err_s,
        threshold: em_base + err_q + err_s,
        direction,
        em_combined: None,
        verdict: None,
    })
}
