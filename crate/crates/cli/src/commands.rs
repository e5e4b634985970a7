//! One function per subcommand. Outputs are computed in full before anything
//! is written, and every write is atomic.

use std::fs;
use std::path::{Path, PathBuf};

use interplay_core::audit::{
    audit_dot, audit_tensor, collision_report, deviation_experiment, orthogonality_threshold,
    DeviationConfig, DeviationExperiment, Direction, DotAudit, Histogram, HistogramSpec,
    TermShares, Verdict,
};
use interplay_core::{
    gaussian_vec, mean_trace, quantize_tensor, select_mask, simulate_seeds, Activation, NormKind,
    Order, PropagationTrace, QuantFormat, SeedSpec, SparsityPattern, StackConfig, Tensor,
};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::args::*;
use crate::config::*;
use crate::report::{num, opt_bool, write_atomic, Csv, Report};
use crate::tnsr::TnsrFile;
use crate::CliError;

type Result<T> = std::result::Result<T, CliError>;

/// Relative slack for the dot-product decomposition identity.
const IDENTITY_TOL: f64 = 1e-9;

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Quantize(a) => quantize(a),
        Command::Sparsify(a) => sparsify(a),
        Command::AuditTensor(a) => audit_tensor_cmd(a),
        Command::AuditDot(a) => audit_dot_cmd(a),
        Command::Deviation(a) => deviation(a),
        Command::Collide(a) => collide(a),
        Command::Propagate(a) => propagate(a),
        Command::Threshold(a) => threshold(a),
        Command::Sweep(a) => sweep(a),
    }
}

// ── Shared helpers ──────────────────────────────────────────────────────────

fn flags<T: Serialize>(flags: &T) -> Value {
    serde_json::to_value(flags).expect("flags serialize")
}

fn format_for(preset: &str, block_size: Option<usize>) -> Result<QuantFormat> {
    let f = QuantFormat::preset(preset)?;
    Ok(match block_size {
        Some(bs) => f.with_block_size(bs)?,
        None => f,
    })
}

fn pattern_for(pattern: &str, tie_mode: &str) -> Result<SparsityPattern> {
    let p: SparsityPattern = pattern.parse()?;
    Ok(p.with_tie_mode(tie_mode.parse()?))
}

fn orders_for(order: &str) -> Result<Vec<Order>> {
    if order.eq_ignore_ascii_case("both") {
        Ok(Order::BOTH.to_vec())
    } else {
        Ok(vec![order.parse()?])
    }
}

fn write_json<C: Serialize, R: Serialize>(
    path: Option<&Path>,
    command: &str,
    config: &C,
    result: R,
) -> Result<()> {
    if let Some(path) = path {
        write_atomic(
            path,
            Report::new(command, config, result).to_json().as_bytes(),
        )?;
    }
    Ok(())
}

fn write_csv(path: Option<&Path>, csv: Csv) -> Result<()> {
    if let Some(path) = path {
        write_atomic(path, csv.into_string().as_bytes())?;
    }
    Ok(())
}

/// Scalars (no dims) are treated as one-element vectors.
fn tensor_shape(file: &TnsrFile) -> Vec<usize> {
    if file.shape.is_empty() {
        vec![1]
    } else {
        file.shape.clone()
    }
}

fn synthetic(rows: usize, cols: usize, seed: u64, block_size: usize) -> Result<Tensor> {
    let len = rows
        .checked_mul(cols)
        .ok_or_else(|| CliError::BadArgs(format!("{rows} x {cols} tensor is too large")))?;
    Ok(Tensor::new(
        vec![rows, cols],
        gaussian_vec(len, SeedSpec::new(seed, 0)),
        block_size,
    )?)
}

#[derive(Debug, Serialize)]
struct ErrorStats {
    elements: usize,
    max_abs_error: f64,
    mean_abs_error: f64,
    l1_error: f64,
    l2_error: f64,
}

impl ErrorStats {
    fn between(x: &[f64], y: &[f64]) -> Self {
        let mut max = 0.0_f64;
        let (mut l1, mut sq) = (0.0, 0.0);
        for (a, b) in x.iter().zip(y) {
            let e = (a - b).abs();
            max = max.max(e);
            l1 += e;
            sq += e * e;
        }
        Self {
            elements: x.len(),
            max_abs_error: max,
            mean_abs_error: l1 / x.len().max(1) as f64,
            l1_error: l1,
            l2_error: sq.sqrt(),
        }
    }

    fn line(&self) -> String {
        format!(
            "max_abs_error={} mean_abs_error={} l1_error={} l2_error={}",
            num(self.max_abs_error),
            num(self.mean_abs_error),
            num(self.l1_error),
            num(self.l2_error)
        )
    }
}

// ── quantize / sparsify ─────────────────────────────────────────────────────

fn quantize(a: QuantizeArgs) -> Result<()> {
    let cfg: QuantizeConfig = resolve(a.common.config.as_deref(), flags(&a.flags))?;
    let f = format_for(&cfg.preset, cfg.block_size)?;
    let file = TnsrFile::read(&a.input)?;
    let tensor = Tensor::with_ragged_tail(tensor_shape(&file), file.data.clone(), f.block_size)?;
    let q = quantize_tensor(&tensor, &f);
    let stats = ErrorStats::between(&file.data, &q);

    let out = TnsrFile::new(file.dtype, file.shape.clone(), q)?;
    write_atomic(&a.output, &out.encode())?;
    write_json(a.common.json.as_deref(), "quantize", &cfg, &stats)?;
    println!("{}", stats.line());
    Ok(())
}

#[derive(Serialize)]
struct SparsifyResult {
    pruned: usize,
    kept: usize,
    #[serde(flatten)]
    stats: ErrorStats,
}

fn sparsify(a: SparsifyArgs) -> Result<()> {
    let cfg: SparsifyConfig = resolve(a.common.config.as_deref(), flags(&a.flags))?;
    let pat = pattern_for(&cfg.pattern, &cfg.tie_mode)?;
    let file = TnsrFile::read(&a.input)?;
    let mask = select_mask(&file.data, &pat)?;
    let s = mask.apply(&file.data);
    let result = SparsifyResult {
        pruned: mask.pruned(),
        kept: mask.kept(),
        stats: ErrorStats::between(&file.data, &s),
    };

    let out = TnsrFile::new(file.dtype, file.shape.clone(), s)?;
    write_atomic(&a.output, &out.encode())?;
    write_json(a.common.json.as_deref(), "sparsify", &cfg, &result)?;
    println!(
        "pruned={} kept={} {}",
        result.pruned,
        result.kept,
        result.stats.line()
    );
    Ok(())
}

// ── audit-tensor ────────────────────────────────────────────────────────────

#[derive(Serialize)]
struct TensorAuditSummary {
    p: f64,
    pattern: String,
    blocks: usize,
    max_eps_qs: f64,
    max_eps_sq: f64,
    max_additional_sq: f64,
    max_identity_residual: f64,
    thm35_violations: usize,
    thm37_violations: usize,
    l1_order_violations: usize,
    thm37_evaluated: usize,
    sq_excess_blocks: usize,
}

const AUDIT_HEADER: &[&str] = &[
    "block",
    "scale",
    "step",
    "pruned",
    "eps_q",
    "eps_s",
    "eps_qs",
    "eps_sq",
    "eps_q_l1",
    "eps_s_l1",
    "eps_qs_l1",
    "eps_sq_l1",
    "thm37_bound",
    "thm37_bound_p",
    "thm35_holds",
    "thm37_holds",
    "l1_order_holds",
    "identity_residual",
];

fn audit_tensor_cmd(a: AuditTensorArgs) -> Result<()> {
    let cfg: AuditTensorConfig = resolve(a.common.config.as_deref(), flags(&a.flags))?;
    let f = format_for(&cfg.preset, cfg.block_size)?;
    let pat = pattern_for(&cfg.pattern, &cfg.tie_mode)?;
    let p = NormKind::new(cfg.p)?;
    let tensor = match &a.input {
        Some(path) => {
            let file = TnsrFile::read(path)?;
            Tensor::new(tensor_shape(&file), file.data, f.block_size)?
        }
        None => synthetic(cfg.rows, cfg.cols, cfg.seed, f.block_size)?,
    };
    let audit = audit_tensor(&tensor, &f, &pat, p)?;

    let mut csv = Csv::new(AUDIT_HEADER);
    for r in &audit.records {
        csv.row([
            r.block.to_string(),
            num(r.scale),
            num(r.step),
            r.pruned.to_string(),
            num(r.eps_q),
            num(r.eps_s),
            num(r.eps_qs),
            num(r.eps_sq),
            num(r.eps_q_l1),
            num(r.eps_s_l1),
            num(r.eps_qs_l1),
            num(r.eps_sq_l1),
            num(r.thm37_bound),
            num(r.thm37_bound_p),
            r.thm35_holds.to_string(),
            opt_bool(r.thm37_holds).into(),
            opt_bool(r.l1_order_holds).into(),
            num(r.identity_residual),
        ]);
    }
    let summary = TensorAuditSummary {
        p: p.p(),
        pattern: pat.to_string(),
        blocks: audit.records.len(),
        max_eps_qs: audit.max_eps_qs,
        max_eps_sq: audit.max_eps_sq,
        max_additional_sq: audit.max_additional_sq,
        max_identity_residual: audit.max_identity_residual,
        thm35_violations: audit.thm35_violations,
        thm37_violations: audit.thm37_violations,
        l1_order_violations: audit.l1_order_violations,
        thm37_evaluated: audit.thm37_evaluated,
        sq_excess_blocks: audit.sq_excess_blocks,
    };
    write_csv(a.csv.as_deref(), csv)?;
    write_json(a.common.json.as_deref(), "audit-tensor", &cfg, &summary)?;
    println!(
        "blocks={} thm35_violations={} thm37_violations={} l1_order_violations={} sq_excess_blocks={}",
        summary.blocks,
        summary.thm35_violations,
        summary.thm37_violations,
        summary.l1_order_violations,
        summary.sq_excess_blocks
    );
    let total = audit.total_violations();
    if a.strict && total > 0 {
        return Err(CliError::Violation(format!(
            "{total} block-level bound violations"
        )));
    }
    Ok(())
}

// ── audit-dot ───────────────────────────────────────────────────────────────

fn dot_ok(a: &DotAudit) -> bool {
    a.identity_residual() <= IDENTITY_TOL * a.dot.abs().max(1.0)
        && a.deviation.is_none_or(|d| d >= 1.0 - IDENTITY_TOL)
}

fn audit_dot_cmd(a: AuditDotArgs) -> Result<()> {
    let cfg: AuditDotConfig = resolve(a.common.config.as_deref(), flags(&a.flags))?;
    let f = QuantFormat::preset(&cfg.preset)?;
    let pat = pattern_for(&cfg.pattern, &cfg.tie_mode)?;
    let audits: Vec<DotAudit> = orders_for(&cfg.order)?
        .into_iter()
        .map(|o| audit_dot(&cfg.x, &cfg.w, &f, &pat, o))
        .collect::<std::result::Result<_, _>>()?;

    write_json(a.common.json.as_deref(), "audit-dot", &cfg, &audits)?;
    for d in &audits {
        println!(
            "order={} eps_total={} eps_s_dot={} eps_q_dot={} eps_t={} eps_i={} deviation={}",
            d.order,
            num(d.eps_total),
            num(d.eps_s_dot),
            num(d.eps_q_dot),
            num(d.eps_t),
            num(d.eps_i),
            num(d.deviation_or_inf())
        );
    }
    if a.strict && !audits.iter().all(dot_ok) {
        return Err(CliError::Violation(
            "dot-product decomposition check failed".into(),
        ));
    }
    Ok(())
}

// ── deviation ───────────────────────────────────────────────────────────────

/// JSON summary of one deviation experiment (per-sample data goes to CSV).
#[derive(Debug, Serialize)]
pub struct DeviationSummary {
    pub order: Order,
    pub samples: usize,
    pub min_deviation: Option<f64>,
    pub median_deviation: Option<f64>,
    /// Fraction of all samples with deviation below 2.
    pub fraction_below_2: f64,
    pub histogram: Histogram,
    pub low_deviation_shares: TermShares,
    pub all_shares: TermShares,
    pub max_identity_residual: f64,
    pub violations: usize,
}

impl DeviationSummary {
    fn of(e: &DeviationExperiment) -> Self {
        let below_2 = e
            .samples
            .iter()
            .filter(|a| a.deviation.is_some_and(|d| d < 2.0))
            .count();
        Self {
            order: e.order,
            samples: e.samples.len(),
            min_deviation: e.min_deviation,
            median_deviation: e.median_deviation,
            fraction_below_2: below_2 as f64 / e.samples.len() as f64,
            histogram: e.histogram.clone(),
            low_deviation_shares: e.low_deviation_shares,
            all_shares: e.all_shares,
            max_identity_residual: e.max_identity_residual,
            violations: e.samples.iter().filter(|a| !dot_ok(a)).count(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct DeviationResult {
    pub experiments: Vec<DeviationSummary>,
}

const DEVIATION_HEADER: &[&str] = &[
    "sample",
    "order",
    "dot",
    "eps_total",
    "eps_s_dot",
    "eps_q_dot",
    "eps_t",
    "eps_i",
    "deviation",
];

fn run_deviation(cfg: &DeviationRunConfig) -> Result<Vec<DeviationExperiment>> {
    let f = QuantFormat::preset(&cfg.preset)?;
    let pat = pattern_for(&cfg.pattern, &cfg.tie_mode)?;
    let histogram = HistogramSpec::uniform(cfg.hist_lo, cfg.hist_hi, cfg.bins)?;
    orders_for(&cfg.order)?
        .into_iter()
        .map(|order| {
            let mut dc = DeviationConfig::new(cfg.count, cfg.n, f, pat, order, cfg.seed);
            dc.histogram = histogram.clone();
            dc.low_deviation_cutoff = cfg.low_cutoff;
            deviation_experiment(&dc).map_err(CliError::from)
        })
        .collect()
}

fn deviation(a: DeviationArgs) -> Result<()> {
    let cfg: DeviationRunConfig = resolve(a.common.config.as_deref(), flags(&a.flags))?;
    let experiments = run_deviation(&cfg)?;

    let mut csv = Csv::new(DEVIATION_HEADER);
    for e in &experiments {
        for (k, s) in e.samples.iter().enumerate() {
            csv.row([
                k.to_string(),
                s.order.to_string(),
                num(s.dot),
                num(s.eps_total),
                num(s.eps_s_dot),
                num(s.eps_q_dot),
                num(s.eps_t),
                num(s.eps_i),
                num(s.deviation_or_inf()),
            ]);
        }
    }
    let result = DeviationResult {
        experiments: experiments.iter().map(DeviationSummary::of).collect(),
    };
    write_csv(a.csv.as_deref(), csv)?;
    write_json(a.common.json.as_deref(), "deviation", &cfg, &result)?;
    for s in &result.experiments {
        println!(
            "order={} samples={} min_deviation={} fraction_below_2={} eps_t_share_low={} eps_i_share_low={}",
            s.order,
            s.samples,
            s.min_deviation.map_or("undefined".into(), num),
            num(s.fraction_below_2),
            num(s.low_deviation_shares.eps_t),
            num(s.low_deviation_shares.eps_i)
        );
    }
    let violations: usize = result.experiments.iter().map(|s| s.violations).sum();
    if a.strict && violations > 0 {
        return Err(CliError::Violation(format!(
            "{violations} samples break the decomposition or the bound"
        )));
    }
    Ok(())
}

// ── collide ─────────────────────────────────────────────────────────────────

#[derive(Serialize)]
struct CollideSummary {
    blocks: usize,
    tensor_unique_before: usize,
    tensor_unique_after: usize,
    blocks_with_reduction: usize,
    fraction_of_blocks_with_reduction: f64,
    max_block_reduction_fraction: f64,
    mean_block_reduction: f64,
    /// `reduction_histogram[k]` blocks lost exactly `k` unique values.
    reduction_histogram: Vec<usize>,
}

fn collide(a: CollideArgs) -> Result<()> {
    let cfg: CollideConfig = resolve(a.common.config.as_deref(), flags(&a.flags))?;
    let f = format_for(&cfg.preset, cfg.block_size)?;
    let tensor = match &a.input {
        Some(path) => {
            let file = TnsrFile::read(path)?;
            Tensor::with_ragged_tail(tensor_shape(&file), file.data, f.block_size)?
        }
        None => synthetic(cfg.rows, cfg.cols, cfg.seed, f.block_size)?,
    };
    let r = collision_report(&tensor, &f);

    let mut csv = Csv::new(&["block", "reduction", "reduction_fraction"]);
    let mut histogram = vec![0; r.per_block_reduction.iter().max().map_or(0, |m| m + 1)];
    for (b, (&red, block)) in r
        .per_block_reduction
        .iter()
        .zip(tensor.blocks())
        .enumerate()
    {
        histogram[red] += 1;
        csv.row([
            b.to_string(),
            red.to_string(),
            num(red as f64 / block.len() as f64),
        ]);
    }
    let summary = CollideSummary {
        blocks: r.per_block_reduction.len(),
        tensor_unique_before: r.tensor_unique_before,
        tensor_unique_after: r.tensor_unique_after,
        blocks_with_reduction: r.blocks_with_reduction,
        fraction_of_blocks_with_reduction: r.fraction_of_blocks_with_reduction(),
        max_block_reduction_fraction: r.max_block_reduction_fraction,
        mean_block_reduction: r.mean_block_reduction,
        reduction_histogram: histogram,
    };
    write_csv(a.csv.as_deref(), csv)?;
    write_json(a.common.json.as_deref(), "collide", &cfg, &summary)?;
    println!(
        "blocks={} unique_before={} unique_after={} fraction_with_reduction={} max_reduction_fraction={}",
        summary.blocks,
        summary.tensor_unique_before,
        summary.tensor_unique_after,
        num(summary.fraction_of_blocks_with_reduction),
        num(summary.max_block_reduction_fraction)
    );
    Ok(())
}

// ── propagate ───────────────────────────────────────────────────────────────

fn parse_layers(s: &str) -> Result<Option<Vec<usize>>> {
    match s.trim().to_ascii_lowercase().as_str() {
        "all" => Ok(None),
        "none" | "" => Ok(Some(Vec::new())),
        list => list
            .split(',')
            .map(|p| {
                p.trim()
                    .parse()
                    .map_err(|e| CliError::BadArgs(format!("compress_layers `{p}`: {e}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Some),
    }
}

#[derive(Serialize)]
struct OrderTrace {
    order: Order,
    seeds: usize,
    mean_rel_l2: Vec<f64>,
    mean_final_rel_l2: f64,
}

fn propagate(a: PropagateArgs) -> Result<()> {
    let cfg: PropagateConfig = resolve(a.common.config.as_deref(), flags(&a.flags))?;
    if cfg.seeds.is_empty() {
        return Err(CliError::BadArgs(
            "propagate needs at least one seed".into(),
        ));
    }
    let f = QuantFormat::preset(&cfg.preset)?;
    let pat = pattern_for(&cfg.pattern, &cfg.tie_mode)?;
    let activation: Activation = cfg.activation.parse()?;
    let compress_layers = parse_layers(&cfg.compress_layers)?;

    let mut all: Vec<(Order, Vec<PropagationTrace>)> = Vec::new();
    for order in orders_for(&cfg.order)? {
        let mut sc = StackConfig::new(cfg.depth, cfg.width, f, pat, order, 0);
        sc.activation = activation;
        sc.weight_std = cfg.weight_std;
        sc.batch = cfg.batch;
        sc.compress_layers = compress_layers.clone();
        all.push((order, simulate_seeds(&sc, &cfg.seeds)?));
    }

    let mut csv = Csv::new(&["layer_index", "rel_l2_error", "order", "seed"]);
    let mut summary = Vec::new();
    for (order, traces) in &all {
        for t in traces {
            for (i, e) in t.rel_l2.iter().enumerate() {
                csv.row([
                    i.to_string(),
                    num(*e),
                    order.to_string(),
                    t.seed.to_string(),
                ]);
            }
        }
        let mean = mean_trace(traces);
        summary.push(OrderTrace {
            order: *order,
            seeds: traces.len(),
            mean_final_rel_l2: *mean.last().expect("depth >= 1"),
            mean_rel_l2: mean,
        });
    }
    write_csv(a.csv.as_deref(), csv)?;
    write_json(a.common.json.as_deref(), "propagate", &cfg, &summary)?;
    for s in &summary {
        println!(
            "order={} seeds={} mean_final_rel_l2={}",
            s.order,
            s.seeds,
            num(s.mean_final_rel_l2)
        );
    }
    Ok(())
}

// ── threshold ───────────────────────────────────────────────────────────────

fn threshold(a: ThresholdArgs) -> Result<()> {
    let cfg: ThresholdConfig = resolve(a.common.config.as_deref(), flags(&a.flags))?;
    let need = |v: Option<f64>, name: &str| {
        v.ok_or_else(|| CliError::BadArgs(format!("--{name} is required")))
    };
    let direction: Direction = cfg.direction.parse()?;
    let mut report = orthogonality_threshold(
        need(cfg.em_base, "em-base")?,
        need(cfg.em_q, "em-q")?,
        need(cfg.em_s, "em-s")?,
        direction,
    )?;
    if let Some(c) = cfg.em_combined {
        report = report.with_combined(c)?;
    }
    write_json(a.common.json.as_deref(), "threshold", &cfg, report)?;
    println!(
        "threshold={:.4} err_q={:.4} err_s={:.4} direction={}",
        report.threshold, report.err_q, report.err_s, report.direction
    );
    if let (Some(c), Some(v)) = (report.em_combined, report.verdict) {
        println!("combined={c:.4} verdict={v}");
        if a.strict && v == Verdict::Violates {
            return Err(CliError::Violation(format!(
                "combined metric {c} is worse than threshold {}",
                report.threshold
            )));
        }
    }
    Ok(())
}

// ── sweep ───────────────────────────────────────────────────────────────────

#[derive(Debug, Serialize)]
struct ManifestEntry {
    preset: String,
    pattern: String,
    order: String,
    seed: u64,
    file: String,
    config_hash: String,
    sha256: String,
}

#[derive(Debug, Serialize)]
struct Manifest {
    cells: Vec<ManifestEntry>,
}

fn file_stem(s: &str) -> String {
    s.chars()
        .map(|c| match c {
            ':' => 'o',
            '%' => 'p',
            c if c.is_ascii_alphanumeric() || c == '-' || c == '.' => c,
            _ => '_',
        })
        .collect()
}

fn sweep(a: SweepArgs) -> Result<()> {
    let cfg: SweepConfig = resolve(a.config.as_deref(), flags(&a.flags))?;
    for p in &cfg.presets {
        QuantFormat::preset(p)?;
    }
    for p in &cfg.patterns {
        p.parse::<SparsityPattern>()?;
    }
    let mut orders = Vec::new();
    for o in &cfg.orders {
        orders.push(o.parse::<Order>()?);
    }

    let mut cells = Vec::new();
    for preset in &cfg.presets {
        for pattern in &cfg.patterns {
            for &order in &orders {
                for &seed in &cfg.seeds {
                    cells.push(DeviationRunConfig {
                        count: cfg.count,
                        n: cfg.n,
                        preset: preset.clone(),
                        pattern: pattern.clone(),
                        order: order.as_str().into(),
                        seed,
                        ..DeviationRunConfig::default()
                    });
                }
            }
        }
    }

    fs::create_dir_all(&a.out_dir)
        .map_err(|e| CliError::Io(format!("{}: {e}", a.out_dir.display())))?;
    let entries: Vec<ManifestEntry> = cells
        .par_iter()
        .map(|cell| {
            let experiments = run_deviation(cell)?;
            let result = DeviationResult {
                experiments: experiments.iter().map(DeviationSummary::of).collect(),
            };
            let json = Report::new("deviation", cell, result).to_json();
            let name = format!(
                "{}__{}__{}__seed{}.json",
                file_stem(&cell.preset),
                file_stem(&cell.pattern),
                cell.order,
                cell.seed
            );
            let path: PathBuf = a.out_dir.join(&name);
            write_atomic(&path, json.as_bytes())?;
            Ok(ManifestEntry {
                preset: cell.preset.clone(),
                pattern: cell.pattern.clone(),
                order: cell.order.clone(),
                seed: cell.seed,
                file: name,
                config_hash: config_hash(cell),
                sha256: sha256_hex(json.as_bytes()),
            })
        })
        .collect::<Result<_>>()?;

    let n = entries.len();
    let manifest = Report::new("sweep", &cfg, Manifest { cells: entries }).to_json();
    write_atomic(&a.out_dir.join("manifest.json"), manifest.as_bytes())?;
    println!(
        "cells={n} manifest={}",
        a.out_dir.join("manifest.json").display()
    );
    Ok(())
}
