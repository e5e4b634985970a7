//! Effective run configuration: defaults, then a JSON config file, then
//! command-line flags, later layers winning.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use crate::CliError;

/// Builds `C` from its defaults, the optional config file and the flag layer.
///
/// `flags` is the serialized flag struct; `null` entries are flags that were
/// not given and leave lower layers untouched.
pub fn resolve<C>(config_path: Option<&Path>, flags: Value) -> Result<C, CliError>
where
    C: Default + Serialize + DeserializeOwned,
{
    let mut merged = to_object(serde_json::to_value(C::default()).expect("config serializes"));
    if let Some(path) = config_path {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let file: Value = serde_json::from_str(&text)
            .map_err(|e| CliError::BadArgs(format!("config {}: {e}", path.display())))?;
        let Value::Object(file) = file else {
            return Err(CliError::BadArgs(format!(
                "config {}: expected a JSON object",
                path.display()
            )));
        };
        // strict parse first so typos in the file are reported by name
        let mut probe = merged.clone();
        probe.extend(file.clone());
        serde_json::from_value::<C>(Value::Object(probe))
            .map_err(|e| CliError::BadArgs(format!("config {}: {e}", path.display())))?;
        merged.extend(file);
    }
    for (k, v) in to_object(flags) {
        if !v.is_null() {
            merged.insert(k, v);
        }
    }
    serde_json::from_value(Value::Object(merged)).map_err(|e| CliError::BadArgs(e.to_string()))
}

fn to_object(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        _ => Map::new(),
    }
}

/// Hex SHA-256 of the config's canonical JSON (struct field order).
pub fn config_hash<C: Serialize>(config: &C) -> String {
    let canonical = serde_json::to_vec(config).expect("config serializes");
    hex::encode(Sha256::digest(canonical))
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

// ── Per-command configs ─────────────────────────────────────────────────────

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuantizeConfig {
    pub preset: String,
    /// `None` uses the preset's block size.
    pub block_size: Option<usize>,
}

impl Default for QuantizeConfig {
    fn default() -> Self {
        Self {
            preset: "INT8".into(),
            block_size: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SparsifyConfig {
    pub pattern: String,
    pub tie_mode: String,
}

impl Default for SparsifyConfig {
    fn default() -> Self {
        Self {
            pattern: "2:4".into(),
            tie_mode: "keep_earlier".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AuditTensorConfig {
    pub preset: String,
    pub pattern: String,
    pub tie_mode: String,
    pub p: f64,
    pub block_size: Option<usize>,
    /// Used when no input tensor is given.
    pub rows: usize,
    pub cols: usize,
    pub seed: u64,
}

impl Default for AuditTensorConfig {
    fn default() -> Self {
        Self {
            preset: "HBFP6-appendix".into(),
            pattern: "2:4".into(),
            tie_mode: "keep_earlier".into(),
            p: 1.0,
            block_size: None,
            rows: 64,
            cols: 64,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AuditDotConfig {
    pub x: Vec<f64>,
    pub w: Vec<f64>,
    pub preset: String,
    pub pattern: String,
    pub tie_mode: String,
    /// `sq`, `qs` or `both`.
    pub order: String,
}

impl Default for AuditDotConfig {
    fn default() -> Self {
        Self {
            x: vec![1.0, 1.0],
            w: vec![0.6, 1.3],
            preset: "HBFP4-paper".into(),
            pattern: "1:2".into(),
            tie_mode: "keep_earlier".into(),
            order: "both".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DeviationRunConfig {
    pub count: usize,
    pub n: usize,
    pub preset: String,
    pub pattern: String,
    pub tie_mode: String,
    pub order: String,
    pub seed: u64,
    pub bins: usize,
    pub hist_lo: f64,
    pub hist_hi: f64,
    pub low_cutoff: f64,
}

impl Default for DeviationRunConfig {
    fn default() -> Self {
        Self {
            count: 1000,
            n: 64,
            preset: "HBFP6-appendix".into(),
            pattern: "2:4".into(),
            tie_mode: "keep_earlier".into(),
            order: "both".into(),
            seed: 0,
            bins: 18,
            hist_lo: 1.0,
            hist_hi: 10.0,
            low_cutoff: 1.05,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CollideConfig {
    pub preset: String,
    pub block_size: Option<usize>,
    pub rows: usize,
    pub cols: usize,
    pub seed: u64,
}

impl Default for CollideConfig {
    fn default() -> Self {
        Self {
            preset: "HBFP6-appendix".into(),
            block_size: Some(64),
            rows: 256,
            cols: 256,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PropagateConfig {
    pub depth: usize,
    pub width: usize,
    pub activation: String,
    pub weight_std: Option<f64>,
    pub batch: usize,
    pub preset: String,
    pub pattern: String,
    pub tie_mode: String,
    pub order: String,
    /// `all`, `none`, or a comma-separated list of layer indices.
    pub compress_layers: String,
    pub seeds: Vec<u64>,
}

impl Default for PropagateConfig {
    fn default() -> Self {
        Self {
            depth: 12,
            width: 256,
            activation: "relu".into(),
            weight_std: None,
            batch: 32,
            preset: "HBFP6-appendix".into(),
            pattern: "2:4".into(),
            tie_mode: "keep_earlier".into(),
            order: "both".into(),
            compress_layers: "all".into(),
            seeds: (0..10).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ThresholdConfig {
    pub em_base: Option<f64>,
    pub em_q: Option<f64>,
    pub em_s: Option<f64>,
    pub em_combined: Option<f64>,
    pub direction: String,
}

impl Default for ThresholdConfig {
    fn default() -> Self {
        Self {
            em_base: None,
            em_q: None,
            em_s: None,
            em_combined: None,
            direction: "lower".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub presets: Vec<String>,
    pub patterns: Vec<String>,
    pub orders: Vec<String>,
    pub seeds: Vec<u64>,
    pub count: usize,
    pub n: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            presets: vec!["HBFP6-appendix".into()],
            patterns: vec!["2:4".into()],
            orders: vec!["sq".into(), "qs".into()],
            seeds: vec![0],
            count: 1000,
            n: 64,
        }
    }
}
