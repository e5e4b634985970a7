//! Max-scaled block quantization for the INT, HBFP, MXINT and MXFP families.
//!
//! Every family derives its grid from the block scale, the largest magnitude
//! in the block. INT uses a uniform grid whose top point is the scale itself;
//! HBFP and MXINT use a power-of-two spacing derived from `log2(scale)`; MXFP
//! divides the block by a shared power of two and rounds each element onto a
//! small floating-point grid.
//!
//! Values stay `f64` on the grid; nothing is bit-packed.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensorcore::{ensure_finite, Tensor};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Family {
    Int,
    Hbfp,
    Mxint,
    Mxfp,
}

/// How `log2(scale)` is turned into an integer exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum ExponentMode {
    #[default]
    Floor,
    Ceil,
}

impl ExponentMode {
    fn apply(self, scale: f64) -> i32 {
        match self {
            ExponentMode::Floor => floor_log2(scale),
            ExponentMode::Ceil => ceil_log2(scale),
        }
    }
}

/// Inclusive range of the integer grid index `round(x / spacing)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MantissaClamp {
    pub lo: i64,
    pub hi: i64,
}

impl MantissaClamp {
    pub const fn symmetric(hi: i64) -> Self {
        Self { lo: -hi, hi }
    }
}

/// Element type of an MXFP format.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MxfpConfig {
    pub exponent_bits: u32,
    pub mantissa_bits: u32,
    pub bias: i32,
    /// Largest finite element magnitude; larger values saturate here.
    pub max_finite: f64,
}

impl MxfpConfig {
    /// OCP E4M3: bias 7, saturating at 448.
    pub const fn e4m3() -> Self {
        Self {
            exponent_bits: 4,
            mantissa_bits: 3,
            bias: 7,
            max_finite: 448.0,
        }
    }

    /// OCP E2M3 (FP6): bias 1, max 7.5.
    pub const fn e2m3() -> Self {
        Self {
            exponent_bits: 2,
            mantissa_bits: 3,
            bias: 1,
            max_finite: 7.5,
        }
    }

    /// OCP E3M2 (FP6): bias 3, max 28.
    pub const fn e3m2() -> Self {
        Self {
            exponent_bits: 3,
            mantissa_bits: 2,
            bias: 3,
            max_finite: 28.0,
        }
    }

    /// Exponent of the smallest normal.
    pub fn min_exponent(&self) -> i32 {
        1 - self.bias
    }

    /// Exponent of the largest finite value's binade.
    pub fn max_exponent(&self) -> i32 {
        floor_log2(self.max_finite)
    }

    fn validate(&self) -> Result<()> {
        if self.exponent_bits == 0 || self.mantissa_bits == 0 {
            return Err(Error::InvalidFormat(
                "MXFP element needs at least one exponent and one mantissa bit".into(),
            ));
        }
        if !(self.max_finite.is_finite() && self.max_finite > 0.0) {
            return Err(Error::InvalidFormat(
                "MXFP max_finite must be positive".into(),
            ));
        }
        let top = (1_i32 << self.exponent_bits) - 1 - self.bias;
        let emax = self.max_exponent();
        if emax < self.min_exponent() || emax > top {
            return Err(Error::InvalidFormat(format!(
                "MXFP max_finite {} does not fit E{}M{} with bias {}",
                self.max_finite, self.exponent_bits, self.mantissa_bits, self.bias
            )));
        }
        let ulp = pow2(emax - self.mantissa_bits as i32);
        if (self.max_finite / ulp).fract() != 0.0 {
            return Err(Error::InvalidFormat(format!(
                "MXFP max_finite {} is not on the element grid",
                self.max_finite
            )));
        }
        Ok(())
    }
}

/// Complete description of a max-scaled block quantizer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantFormat {
    pub family: Family,
    /// Mantissa/element bit parameter; for MXFP this is the element's
    /// mantissa width.
    pub m: u32,
    pub exponent_mode: ExponentMode,
    /// Grid-index clamp for INT/HBFP/MXINT. MXFP saturates at
    /// `MxfpConfig::max_finite` instead.
    pub mantissa_clamp: MantissaClamp,
    pub mxfp: Option<MxfpConfig>,
    /// Partition size used when quantizing whole tensors.
    pub block_size: usize,
}

pub const DEFAULT_BLOCK_SIZE: usize = 64;
pub const MX_BLOCK_SIZE: usize = 32;

impl QuantFormat {
    /// Symmetric INT`m`: spacing `scale / (2^(m-1) - 1)`.
    pub fn int(m: u32) -> Result<Self> {
        check_bits(m)?;
        Self {
            family: Family::Int,
            m,
            exponent_mode: ExponentMode::Floor,
            mantissa_clamp: MantissaClamp::symmetric((1_i64 << (m - 1)) - 1),
            mxfp: None,
            block_size: DEFAULT_BLOCK_SIZE,
        }
        .validated()
    }

    /// HBFP`m`: spacing `2^(e - (m - 1))` with `e` the rounded `log2(scale)`.
    pub fn hbfp(m: u32, mode: ExponentMode) -> Result<Self> {
        Self::pow2_family(Family::Hbfp, m, mode, DEFAULT_BLOCK_SIZE)
    }

    /// MXINT`m`: same grid rule as HBFP, MX block size.
    pub fn mxint(m: u32, mode: ExponentMode) -> Result<Self> {
        Self::pow2_family(Family::Mxint, m, mode, MX_BLOCK_SIZE)
    }

    pub fn mxfp(element: MxfpConfig, mode: ExponentMode) -> Result<Self> {
        let m = element.mantissa_bits;
        Self {
            family: Family::Mxfp,
            m,
            exponent_mode: mode,
            mantissa_clamp: MantissaClamp::symmetric((1_i64 << (m + 1)) - 1),
            mxfp: Some(element),
            block_size: MX_BLOCK_SIZE,
        }
        .validated()
    }

    fn pow2_family(family: Family, m: u32, mode: ExponentMode, block_size: usize) -> Result<Self> {
        check_bits(m)?;
        Self {
            family,
            m,
            exponent_mode: mode,
            mantissa_clamp: default_pow2_clamp(m, mode),
            mxfp: None,
            block_size,
        }
        .validated()
    }

    pub fn with_block_size(mut self, block_size: usize) -> Result<Self> {
        self.block_size = block_size;
        self.validated()
    }

    pub fn with_clamp(mut self, lo: i64, hi: i64) -> Result<Self> {
        self.mantissa_clamp = MantissaClamp { lo, hi };
        self.validated()
    }

    pub fn validated(self) -> Result<Self> {
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.block_size == 0 {
            return Err(Error::InvalidFormat("block_size must be positive".into()));
        }
        let MantissaClamp { lo, hi } = self.mantissa_clamp;
        if !(lo < 0 && hi > 0) {
            return Err(Error::InvalidFormat(format!(
                "mantissa clamp must satisfy lo < 0 < hi, got [{lo}, {hi}]"
            )));
        }
        match (self.family, self.mxfp) {
            (Family::Mxfp, None) => Err(Error::InvalidFormat(
                "MXFP requires an element config".into(),
            )),
            (Family::Mxfp, Some(cfg)) => {
                cfg.validate()?;
                if cfg.mantissa_bits != self.m {
                    return Err(Error::InvalidFormat(format!(
                        "m = {} disagrees with element mantissa bits {}",
                        self.m, cfg.mantissa_bits
                    )));
                }
                Ok(())
            }
            (_, Some(_)) => Err(Error::InvalidFormat(
                "element config is only meaningful for MXFP".into(),
            )),
            (_, None) => check_bits(self.m),
        }
    }

    /// Looks up one of the named presets (see [`PRESET_NAMES`]).
    pub fn preset(name: &str) -> Result<Self> {
        let hbfp = |m, mode| QuantFormat::hbfp(m, mode);
        match name {
            "INT8" => Self::int(8),
            "INT4" => Self::int(4),
            "HBFP8-appendix" => hbfp(8, ExponentMode::Ceil),
            "HBFP6-appendix" => hbfp(6, ExponentMode::Ceil),
            "HBFP4-appendix" => hbfp(4, ExponentMode::Ceil),
            "HBFP8-paper" => hbfp(8, ExponentMode::Floor),
            "HBFP6-paper" => hbfp(6, ExponentMode::Floor),
            "HBFP4-paper" => hbfp(4, ExponentMode::Floor),
            "MXINT8" => Self::mxint(8, ExponentMode::Ceil),
            "MXFP8" => Self::mxfp(MxfpConfig::e4m3(), ExponentMode::Floor),
            "MXFP6" => Self::mxfp(MxfpConfig::e2m3(), ExponentMode::Floor),
            other => Err(Error::UnknownPreset(other.to_string())),
        }
    }

    /// Grid for a block with the given scale.
    pub fn grid(&self, scale: f64) -> BlockGrid {
        BlockGrid::new(self, scale)
    }
}

/// Stable preset names accepted by [`QuantFormat::preset`].
pub const PRESET_NAMES: &[&str] = &[
    "INT8",
    "INT4",
    "HBFP8-appendix",
    "HBFP6-appendix",
    "HBFP4-appendix",
    "HBFP8-paper",
    "HBFP6-paper",
    "HBFP4-paper",
    "MXINT8",
    "MXFP8",
    "MXFP6",
];

/// A named, resolved format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FormatPreset {
    pub name: String,
    pub format: QuantFormat,
}

impl FormatPreset {
    pub fn lookup(name: &str) -> Result<Self> {
        Ok(Self {
            name: name.to_string(),
            format: QuantFormat::preset(name)?,
        })
    }

    pub fn all() -> Vec<FormatPreset> {
        PRESET_NAMES
            .iter()
            .map(|n| Self::lookup(n).expect("preset table is valid"))
            .collect()
    }
}

impl FromStr for FormatPreset {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::lookup(s)
    }
}

impl fmt::Display for FormatPreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

fn check_bits(m: u32) -> Result<()> {
    if (2..=32).contains(&m) {
        Ok(())
    } else {
        Err(Error::InvalidFormat(format!(
            "m must be in [2, 32], got {m}"
        )))
    }
}

// CEIL puts scale/spacing in (2^(m-2), 2^(m-1)]; FLOOR puts it in
// [2^(m-1), 2^m). The clamps below never cut the block maximum under CEIL,
// and under FLOOR keep the rounded maximum inside the same binade, which is
// what makes quantization idempotent for both modes.
fn default_pow2_clamp(m: u32, mode: ExponentMode) -> MantissaClamp {
    match mode {
        ExponentMode::Ceil => MantissaClamp::symmetric(1_i64 << (m - 1)),
        ExponentMode::Floor => MantissaClamp::symmetric((1_i64 << m) - 1),
    }
}

// ── Binary exponent helpers ─────────────────────────────────────────────────

/// `2^e` built from the bit pattern, exact over the whole f64 range.
pub(crate) fn pow2(e: i32) -> f64 {
    if e > 1023 {
        f64::INFINITY
    } else if e >= -1022 {
        f64::from_bits(((e + 1023) as u64) << 52)
    } else if e >= -1074 {
        f64::from_bits(1_u64 << (e + 1074))
    } else {
        0.0
    }
}

/// Exact `floor(log2(a))` for finite `a > 0`.
pub(crate) fn floor_log2(a: f64) -> i32 {
    debug_assert!(a > 0.0 && a.is_finite());
    let bits = a.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i32;
    let frac = bits & ((1_u64 << 52) - 1);
    if exp == 0 {
        -1074 + (63 - frac.leading_zeros() as i32)
    } else {
        exp - 1023
    }
}

/// Exact `ceil(log2(a))` for finite `a > 0`.
pub(crate) fn ceil_log2(a: f64) -> i32 {
    let bits = a.to_bits();
    let exp = (bits >> 52) & 0x7ff;
    let frac = bits & ((1_u64 << 52) - 1);
    let is_pow2 = if exp == 0 {
        frac.is_power_of_two()
    } else {
        frac == 0
    };
    floor_log2(a) + i32::from(!is_pow2)
}

// ── Per-block grid ──────────────────────────────────────────────────────────

/// The quantization grid of one block, fixed by its scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BlockGrid {
    /// Scale 0: everything maps to 0.
    Zero,
    /// INT: index `k` maps to `scale * k / levels`.
    Int {
        scale: f64,
        levels: f64,
        clamp: MantissaClamp,
    },
    /// HBFP/MXINT: index `k` maps to `k * spacing`.
    Pow2 { spacing: f64, clamp: MantissaClamp },
    /// MXFP: elements are divided by `shared` then rounded on the element grid.
    Float { shared: f64, element: MxfpConfig },
}

impl BlockGrid {
    pub fn new(format: &QuantFormat, scale: f64) -> Self {
        if scale == 0.0 {
            return BlockGrid::Zero;
        }
        let clamp = format.mantissa_clamp;
        match format.family {
            Family::Int => BlockGrid::Int {
                scale,
                levels: ((1_i64 << (format.m - 1)) - 1) as f64,
                clamp,
            },
            Family::Hbfp | Family::Mxint => {
                let e = format.exponent_mode.apply(scale);
                BlockGrid::Pow2 {
                    spacing: pow2(e - (format.m as i32 - 1)),
                    clamp,
                }
            }
            Family::Mxfp => {
                let element = format.mxfp.expect("validated MXFP format");
                let e = format.exponent_mode.apply(scale);
                BlockGrid::Float {
                    shared: pow2(e - element.max_exponent()),
                    element,
                }
            }
        }
    }

    /// Rounds one element onto the grid (round half away from zero).
    pub fn quantize(&self, x: f64) -> f64 {
        let q = match *self {
            BlockGrid::Zero => 0.0,
            BlockGrid::Int {
                scale,
                levels,
                clamp,
            } => {
                let k = clamp_index((x * levels / scale).round(), clamp);
                scale * (k / levels)
            }
            BlockGrid::Pow2 { spacing, clamp } => {
                if spacing == 0.0 {
                    return x;
                }
                clamp_index((x / spacing).round(), clamp) * spacing
            }
            BlockGrid::Float { shared, element } => {
                let a = x.abs() / shared;
                if a == 0.0 {
                    return 0.0;
                }
                let e = floor_log2(a).clamp(element.min_exponent(), element.max_exponent());
                let ulp = pow2(e - element.mantissa_bits as i32);
                let r = ((a / ulp).round() * ulp).min(element.max_finite);
                r.copysign(x) * shared
            }
        };
        // normalizes -0.0
        q + 0.0
    }

    /// Largest error magnitude any element with `|x| <= scale` can incur.
    pub fn step(&self, scale: f64) -> f64 {
        match *self {
            BlockGrid::Zero => 0.0,
            BlockGrid::Int { levels, clamp, .. } => {
                let spacing = scale / levels;
                uniform_step(spacing, scale, clamp)
            }
            BlockGrid::Pow2 { spacing, clamp } => uniform_step(spacing, scale, clamp),
            BlockGrid::Float { shared, element } => {
                let top = scale / shared;
                let e = floor_log2(top).clamp(element.min_exponent(), element.max_exponent());
                let half_ulp = pow2(e - element.mantissa_bits as i32 - 1);
                let overflow = top - element.max_finite;
                half_ulp.max(overflow) * shared
            }
        }
    }
}

fn clamp_index(k: f64, clamp: MantissaClamp) -> f64 {
    k.clamp(clamp.lo as f64, clamp.hi as f64)
}

fn uniform_step(spacing: f64, scale: f64, clamp: MantissaClamp) -> f64 {
    let reach = clamp.hi.min(-clamp.lo) as f64 * spacing;
    (spacing / 2.0).max(scale - reach)
}

// ── Operations ──────────────────────────────────────────────────────────────

/// Largest magnitude in the block.
pub fn block_scale(block: &[f64]) -> f64 {
    block.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

/// Quantizes `block` as a single max-scaled block.
pub fn quantize_block(block: &[f64], format: &QuantFormat) -> Result<Vec<f64>> {
    if block.is_empty() {
        return Err(Error::Empty("block"));
    }
    ensure_finite(block)?;
    Ok(quantize_block_unchecked(block, format))
}

pub(crate) fn quantize_block_unchecked(block: &[f64], format: &QuantFormat) -> Vec<f64> {
    let grid = format.grid(block_scale(block));
    block.iter().map(|&x| grid.quantize(x)).collect()
}

/// `block - quantize_block(block)`.
pub fn quant_error(block: &[f64], format: &QuantFormat) -> Result<Vec<f64>> {
    let q = quantize_block(block, format)?;
    Ok(block.iter().zip(&q).map(|(x, y)| x - y).collect())
}

/// Per-element error bound for a block of the given scale, including the
/// worst case introduced by clamping or saturation.
pub fn step_bound(format: &QuantFormat, scale: f64) -> f64 {
    format.grid(scale).step(scale)
}

/// Quantizes every block of `data` (chunks of `block_size`) independently.
pub(crate) fn quantize_chunks(data: &[f64], block_size: usize, format: &QuantFormat) -> Vec<f64> {
    let mut out = vec![0.0; data.len()];
    out.par_chunks_mut(block_size)
        .zip(data.par_chunks(block_size))
        .for_each(|(dst, src)| {
            let grid = format.grid(block_scale(src));
            for (d, &x) in dst.iter_mut().zip(src) {
                *d = grid.quantize(x);
            }
        });
    out
}

/// Quantizes each block of the tensor with its own scale.
pub fn quantize_tensor(tensor: &Tensor, format: &QuantFormat) -> Vec<f64> {
    quantize_chunks(tensor.data(), tensor.block_size(), format)
}

/// Tensor-level step: the largest per-block step bound.
pub fn tensor_step_bound(tensor: &Tensor, format: &QuantFormat) -> f64 {
    tensor
        .blocks()
        .map(|b| step_bound(format, block_scale(b)))
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn preset(name: &str) -> QuantFormat {
        QuantFormat::preset(name).unwrap()
    }

    #[test]
    fn binary_exponents_are_exact() {
        assert_eq!(floor_log2(1.0), 0);
        assert_eq!(floor_log2(1.9999999999999998), 0);
        assert_eq!(floor_log2(2.0), 1);
        assert_eq!(ceil_log2(2.0), 1);
        assert_eq!(ceil_log2(2.0000000000000004), 2);
        assert_eq!(floor_log2(0.3), -2);
        assert_eq!(ceil_log2(0.3), -1);
        assert_eq!(floor_log2(f64::from_bits(1)), -1074);
        assert_eq!(ceil_log2(f64::from_bits(3)), -1072);
        assert_eq!(pow2(-3), 0.125);
        assert_eq!(pow2(-1074), f64::from_bits(1));
        assert_eq!(pow2(10), 1024.0);
    }

    #[test]
    fn block_scale_examples() {
        assert_eq!(block_scale(&[3.9, 4.0]), 4.0);
        assert_eq!(block_scale(&[0.0, 0.0]), 0.0);
        assert_eq!(block_scale(&[0.6, 1.3]), 1.3);
        assert_eq!(block_scale(&[-5.0, 1.3]), 5.0);
    }

    #[test]
    fn int4_collides_near_scale() {
        let f = preset("INT4");
        assert_eq!(quantize_block(&[3.9, 4.0], &f).unwrap(), vec![4.0, 4.0]);
        let err = quant_error(&[3.9, 4.0], &f).unwrap();
        assert!((err[0] + 0.1).abs() < 1e-12);
        assert_eq!(err[1], 0.0);
    }

    #[test]
    fn hbfp4_floor_matches_worked_example() {
        let f = preset("HBFP4-paper");
        assert_eq!(quantize_block(&[0.6, 1.3], &f).unwrap(), vec![0.625, 1.25]);
        let err = quant_error(&[0.6, 1.3], &f).unwrap();
        assert!((err[0] + 0.025).abs() < 1e-12);
        assert!((err[1] - 0.05).abs() < 1e-12);
    }

    #[test]
    fn hbfp4_ceil_follows_literal_formula() {
        // ceil(log2 1.3) = 1, spacing 0.25
        let f = preset("HBFP4-appendix");
        assert_eq!(quantize_block(&[0.6, 1.3], &f).unwrap(), vec![0.5, 1.25]);
    }

    #[test]
    fn grid_resident_block_is_fixed() {
        let b = [1.0, 0.5, -0.25, 0.0];
        assert_eq!(
            quantize_block(&b, &preset("HBFP4-paper")).unwrap(),
            b.to_vec()
        );
    }

    #[test]
    fn equality_witness_block() {
        for name in ["HBFP4-paper", "HBFP4-appendix"] {
            assert_eq!(
                quantize_block(&[4.0, 4.1], &preset(name)).unwrap(),
                vec![4.0, 4.0]
            );
        }
        // The symmetric INT4 formula keeps the max exact instead.
        let q = quantize_block(&[4.0, 4.1], &preset("INT4")).unwrap();
        assert_eq!(q, vec![4.1, 4.1]);
    }

    #[test]
    fn step_bound_examples() {
        assert!((step_bound(&preset("INT4"), 4.0) - 2.0 / 7.0).abs() < 1e-15);
        assert_eq!(step_bound(&preset("HBFP4-paper"), 1.3), 0.0625);
        for name in PRESET_NAMES {
            assert_eq!(step_bound(&preset(name), 0.0), 0.0);
        }
    }

    #[test]
    fn floor_clamp_widens_step_near_binade_top() {
        // spacing 0.125, index clamp 15 -> reach 1.875
        let f = preset("HBFP4-paper");
        assert_eq!(step_bound(&f, 1.99), 1.99 - 1.875);
        let q = quantize_block(&[1.99, 1.125], &f).unwrap();
        assert_eq!(q, vec![1.875, 1.125]);
        assert_eq!(quantize_block(&q, &f).unwrap(), q);
    }

    #[test]
    fn ceil_mode_idempotent_when_max_drops_a_binade() {
        // scale 2.05 -> spacing 0.5, max rounds to 2.0 = 2^(c-1)
        let f = preset("HBFP4-appendix");
        let q = quantize_block(&[2.05, -1.4], &f).unwrap();
        assert_eq!(q, vec![2.0, -1.5]);
        assert_eq!(quantize_block(&q, &f).unwrap(), q);
    }

    #[test]
    fn mxfp_grids() {
        // E2M3, scale 3.0 -> shared 2^(1-2) = 0.5, elements in [0, 6]
        let f = preset("MXFP6");
        let q = quantize_block(&[3.0, 0.3, -1.1, 0.01], &f).unwrap();
        assert_eq!(q, vec![3.0, 0.3125, -1.125, 0.0]);
        // saturation: scale 7.9 -> shared 1, max element 7.5
        let q = quantize_block(&[7.9, 7.6], &f).unwrap();
        assert_eq!(q, vec![7.5, 7.5]);
        assert!((step_bound(&f, 7.9) - 0.4).abs() < 1e-12);
        // E4M3: scale 1.0 -> shared 2^-8
        let f8 = preset("MXFP8");
        let q = quantize_block(&[1.0, 0.3], &f8).unwrap();
        assert_eq!(q, vec![1.0, 0.3125]);
    }

    #[test]
    fn zero_block_and_signs() {
        for name in PRESET_NAMES {
            let f = preset(name);
            assert_eq!(quantize_block(&[0.0; 4], &f).unwrap(), vec![0.0; 4]);
            let q = quantize_block(&[-1e-9, 1.0], &f).unwrap();
            assert_eq!(q[0].to_bits(), 0.0_f64.to_bits(), "{name}");
        }
    }

    #[test]
    fn rejects_non_finite_and_bad_formats() {
        assert!(matches!(
            quantize_block(&[1.0, f64::NAN], &preset("INT8")),
            Err(Error::NonFinite { index: 1, .. })
        ));
        assert!(quantize_block(&[], &preset("INT8")).is_err());
        assert!(matches!(
            QuantFormat::preset("FP4"),
            Err(Error::UnknownPreset(_))
        ));
        assert!(QuantFormat::int(1).is_err());
        assert!(preset("INT8").with_clamp(0, 5).is_err());
        assert!(preset("INT8").with_block_size(0).is_err());
        let mut bad = preset("MXFP8");
        bad.mxfp = None;
        assert!(bad.validate().is_err());
        let odd = MxfpConfig {
            max_finite: 447.0,
            ..MxfpConfig::e4m3()
        };
        assert!(QuantFormat::mxfp(odd, ExponentMode::Floor).is_err());
        assert!(QuantFormat::mxfp(MxfpConfig::e3m2(), ExponentMode::Floor).is_ok());
    }

    #[test]
    fn tensor_blocks_use_their_own_scale() {
        let t = Tensor::new(vec![4], vec![3.9, 4.0, 0.6, 1.3], 2).unwrap();
        let q = quantize_tensor(&t, &preset("HBFP4-paper"));
        assert_eq!(&q[2..], &[0.625, 1.25]);
        assert_eq!(tensor_step_bound(&t, &preset("HBFP4-paper")), 0.25);
    }
}
