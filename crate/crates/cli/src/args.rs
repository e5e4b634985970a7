//! Command-line surface. Each `*Flags` struct mirrors a config struct field
//! for field; unset flags serialize as `null` and defer to the config file.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "compress-interplay",
    version,
    about = "Audit how quantization and sparsity errors compose"
)]
pub struct Cli {
    /// Worker threads (0 = one per core).
    #[arg(
        long,
        global = true,
        env = "COMPRESS_INTERPLAY_JOBS",
        default_value_t = 0
    )]
    pub jobs: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Quantize a TNSR tensor block by block.
    Quantize(QuantizeArgs),
    /// Magnitude-prune a TNSR tensor.
    Sparsify(SparsifyArgs),
    /// Per-block audit of both composition orders.
    AuditTensor(AuditTensorArgs),
    /// Dot-product error decomposition for one activation/weight pair.
    AuditDot(AuditDotArgs),
    /// Deviation statistics over random block pairs.
    Deviation(DeviationArgs),
    /// Unique-value reduction caused by quantization.
    Collide(CollideArgs),
    /// Error propagation through a synthetic layer stack.
    Propagate(PropagateArgs),
    /// Orthogonality threshold from externally measured metrics.
    Threshold(ThresholdArgs),
    /// Deviation experiments over a preset x pattern x order x seed grid.
    Sweep(SweepArgs),
}

/// A comma-separated list; the empty string is the empty list.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct NameList(pub Vec<String>);

pub fn parse_names(s: &str) -> Result<NameList, String> {
    Ok(NameList(
        s.split(',')
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .map(String::from)
            .collect(),
    ))
}

/// Seeds as `a,b,c` or a half-open range `lo..hi`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct SeedList(pub Vec<u64>);

pub fn parse_seeds(s: &str) -> Result<SeedList, String> {
    if let Some((lo, hi)) = s.split_once("..") {
        let lo: u64 = lo.trim().parse().map_err(|e| format!("range start: {e}"))?;
        let hi: u64 = hi.trim().parse().map_err(|e| format!("range end: {e}"))?;
        if hi < lo {
            return Err(format!("empty range {lo}..{hi} is reversed"));
        }
        return Ok(SeedList((lo..hi).collect()));
    }
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| p.parse().map_err(|e| format!("seed `{p}`: {e}")))
        .collect::<Result<_, _>>()
        .map(SeedList)
}

#[derive(Debug, Args)]
pub struct Common {
    /// JSON config file; flags given on the command line take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Write the JSON report here.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct QuantizeArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub flags: QuantizeFlags,
}

#[derive(Debug, Args, Serialize)]
pub struct QuantizeFlags {
    #[arg(long)]
    pub preset: Option<String>,
    #[arg(long)]
    pub block_size: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SparsifyArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub flags: SparsifyFlags,
}

#[derive(Debug, Args, Serialize)]
pub struct SparsifyFlags {
    /// `N:M`, `p%`, or `dense`.
    #[arg(long)]
    pub pattern: Option<String>,
    /// `keep_earlier` or `keep_later`.
    #[arg(long)]
    pub tie_mode: Option<String>,
}

#[derive(Debug, Args)]
pub struct AuditTensorArgs {
    /// TNSR input; without it a Gaussian `rows x cols` tensor is drawn.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Per-block CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Exit 1 when any block violates a bound.
    #[arg(long)]
    pub strict: bool,
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub flags: AuditTensorFlags,
}

#[derive(Debug, Args, Serialize)]
pub struct AuditTensorFlags {
    #[arg(long)]
    pub preset: Option<String>,
    #[arg(long)]
    pub pattern: Option<String>,
    #[arg(long)]
    pub tie_mode: Option<String>,
    /// Norm order, `p >= 1`.
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub block_size: Option<usize>,
    #[arg(long)]
    pub rows: Option<usize>,
    #[arg(long)]
    pub cols: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct AuditDotArgs {
    /// Exit 1 when the decomposition or the deviation bound fails.
    #[arg(long)]
    pub strict: bool,
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub flags: AuditDotFlags,
}

#[derive(Debug, Args, Serialize)]
pub struct AuditDotFlags {
    /// Activation block, comma-separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub x: Option<Vec<f64>>,
    /// Weight block, comma-separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub w: Option<Vec<f64>>,
    #[arg(long)]
    pub preset: Option<String>,
    #[arg(long)]
    pub pattern: Option<String>,
    #[arg(long)]
    pub tie_mode: Option<String>,
    /// `sq`, `qs` or `both`.
    #[arg(long)]
    pub order: Option<String>,
}

#[derive(Debug, Args)]
pub struct DeviationArgs {
    /// Per-sample CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Exit 1 when a sample breaks the decomposition or has deviation below 1.
    #[arg(long)]
    pub strict: bool,
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub flags: DeviationFlags,
}

#[derive(Debug, Args, Serialize)]
pub struct DeviationFlags {
    #[arg(long)]
    pub count: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub preset: Option<String>,
    #[arg(long)]
    pub pattern: Option<String>,
    #[arg(long)]
    pub tie_mode: Option<String>,
    /// `sq`, `qs` or `both`.
    #[arg(long)]
    pub order: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub bins: Option<usize>,
    #[arg(long)]
    pub hist_lo: Option<f64>,
    #[arg(long)]
    pub hist_hi: Option<f64>,
    /// Samples below this deviation feed the term-share means.
    #[arg(long)]
    pub low_cutoff: Option<f64>,
}

#[derive(Debug, Args)]
pub struct CollideArgs {
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Per-block CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub flags: CollideFlags,
}

#[derive(Debug, Args, Serialize)]
pub struct CollideFlags {
    #[arg(long)]
    pub preset: Option<String>,
    #[arg(long)]
    pub block_size: Option<usize>,
    #[arg(long)]
    pub rows: Option<usize>,
    #[arg(long)]
    pub cols: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct PropagateArgs {
    /// Per-layer CSV for every seed and order.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub flags: PropagateFlags,
}

#[derive(Debug, Args, Serialize)]
pub struct PropagateFlags {
    #[arg(long)]
    pub depth: Option<usize>,
    #[arg(long)]
    pub width: Option<usize>,
    /// `relu` or `identity`.
    #[arg(long)]
    pub activation: Option<String>,
    #[arg(long)]
    pub weight_std: Option<f64>,
    #[arg(long)]
    pub batch: Option<usize>,
    #[arg(long)]
    pub preset: Option<String>,
    #[arg(long)]
    pub pattern: Option<String>,
    #[arg(long)]
    pub tie_mode: Option<String>,
    /// `sq`, `qs` or `both`.
    #[arg(long)]
    pub order: Option<String>,
    /// `all`, `none`, or indices such as `3` or `0,5`.
    #[arg(long)]
    pub compress_layers: Option<String>,
    /// `0,1,2` or `0..10`.
    #[arg(long, value_parser = parse_seeds)]
    pub seeds: Option<SeedList>,
}

#[derive(Debug, Args)]
pub struct ThresholdArgs {
    /// Exit 1 when the combined metric violates the threshold.
    #[arg(long)]
    pub strict: bool,
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub flags: ThresholdFlags,
}

#[derive(Debug, Args, Serialize)]
pub struct ThresholdFlags {
    #[arg(long, allow_negative_numbers = true)]
    pub em_base: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub em_q: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub em_s: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub em_combined: Option<f64>,
    /// `lower` (perplexity) or `higher` (accuracy).
    #[arg(long)]
    pub direction: Option<String>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Directory for cell reports and `manifest.json`.
    #[arg(long)]
    pub out_dir: PathBuf,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub flags: SweepFlags,
}

#[derive(Debug, Args, Serialize)]
pub struct SweepFlags {
    #[arg(long, value_parser = parse_names)]
    pub presets: Option<NameList>,
    #[arg(long, value_parser = parse_names)]
    pub patterns: Option<NameList>,
    #[arg(long, value_parser = parse_names)]
    pub orders: Option<NameList>,
    #[arg(long, value_parser = parse_seeds)]
    pub seeds: Option<SeedList>,
    #[arg(long)]
    pub count: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn seed_lists() {
        assert_eq!(parse_seeds("0..3").unwrap(), SeedList(vec![0, 1, 2]));
        assert_eq!(parse_seeds("4, 9").unwrap(), SeedList(vec![4, 9]));
        assert_eq!(parse_seeds("").unwrap(), SeedList(vec![]));
        assert!(parse_seeds("3..1").is_err());
        assert!(parse_seeds("x").is_err());
        assert_eq!(parse_names("").unwrap(), NameList(vec![]));
        assert_eq!(parse_names("INT8,MXFP8").unwrap().0, vec!["INT8", "MXFP8"]);
    }
}
