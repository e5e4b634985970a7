//! Value types shared by every experiment: blocks, flat tensors, Lp norms and
//! the seeded Gaussian generator.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Rejects NaN and infinities; every transformation assumes finite input.
pub fn ensure_finite(values: &[f64]) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(index) => Err(Error::NonFinite {
            index,
            value: values[index],
        }),
        None => Ok(()),
    }
}

/// A fixed-length run of finite reals: the unit of max-scaled quantization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Block(Vec<f64>);

impl Block {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Empty("block"));
        }
        ensure_finite(&values)?;
        Ok(Self(values))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

impl AsRef<[f64]> for Block {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// Row-major tensor partitioned into blocks of `block_size` along the
/// flattened data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tensor {
    shape: Vec<usize>,
    data: Vec<f64>,
    block_size: usize,
    ragged_tail: bool,
}

impl Tensor {
    /// Builds a tensor whose length must be a multiple of `block_size`.
    pub fn new(shape: Vec<usize>, data: Vec<f64>, block_size: usize) -> Result<Self> {
        Self::build(shape, data, block_size, false)
    }

    /// Like [`Tensor::new`] but lets the final block be shorter.
    pub fn with_ragged_tail(shape: Vec<usize>, data: Vec<f64>, block_size: usize) -> Result<Self> {
        Self::build(shape, data, block_size, true)
    }

    /// A one-dimensional tensor that is a single block.
    pub fn from_block(values: Vec<f64>) -> Result<Self> {
        let n = values.len();
        Self::new(vec![n], values, n)
    }

    fn build(
        shape: Vec<usize>,
        data: Vec<f64>,
        block_size: usize,
        ragged_tail: bool,
    ) -> Result<Self> {
        if shape.is_empty() || shape.contains(&0) {
            return Err(Error::InvalidConfig(format!(
                "tensor shape must be non-empty with positive dims, got {shape:?}"
            )));
        }
        if block_size == 0 {
            return Err(Error::InvalidConfig("block_size must be positive".into()));
        }
        let expected: usize = shape.iter().product();
        if expected != data.len() {
            return Err(Error::ShapeMismatch {
                shape,
                expected,
                actual: data.len(),
            });
        }
        if !ragged_tail && !data.len().is_multiple_of(block_size) {
            return Err(Error::Indivisible {
                len: data.len(),
                divisor: block_size,
                what: "tensor length by block size",
            });
        }
        ensure_finite(&data)?;
        Ok(Self {
            shape,
            data,
            block_size,
            ragged_tail,
        })
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub fn block_size(&self) -> usize {
        self.block_size
    }

    pub fn allows_ragged_tail(&self) -> bool {
        self.ragged_tail
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn num_blocks(&self) -> usize {
        self.data.len().div_ceil(self.block_size)
    }

    pub fn blocks(&self) -> std::slice::Chunks<'_, f64> {
        self.data.chunks(self.block_size)
    }

    /// Same shape and partition, new data.
    pub fn with_data(&self, data: Vec<f64>) -> Result<Self> {
        Self::build(self.shape.clone(), data, self.block_size, self.ragged_tail)
    }
}

/// Order `p` of an Lp norm, restricted to `[1, +inf)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct NormKind(f64);

impl NormKind {
    pub const L1: NormKind = NormKind(1.0);
    pub const L2: NormKind = NormKind(2.0);

    pub fn new(p: f64) -> Result<Self> {
        if p.is_finite() && p >= 1.0 {
            Ok(Self(p))
        } else {
            Err(Error::InvalidNorm(p))
        }
    }

    pub fn p(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for NormKind {
    type Error = Error;
    fn try_from(p: f64) -> Result<Self> {
        Self::new(p)
    }
}

impl From<NormKind> for f64 {
    fn from(p: NormKind) -> f64 {
        p.0
    }
}

/// `(sum |v_i|^p)^(1/p)`.
pub fn lp_norm(v: &[f64], p: NormKind) -> Result<f64> {
    if v.is_empty() {
        return Err(Error::Empty("norm input"));
    }
    ensure_finite(v)?;
    Ok(lp_norm_unchecked(v, p))
}

/// Lp norm of a finite, possibly empty vector. The general branch divides by
/// the max magnitude first so large `p` cannot overflow.
pub(crate) fn lp_norm_unchecked(v: &[f64], p: NormKind) -> f64 {
    let p = p.0;
    if p == 1.0 {
        return v.iter().map(|x| x.abs()).sum();
    }
    if p == 2.0 {
        return v.iter().map(|x| x * x).sum::<f64>().sqrt();
    }
    let peak = v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    if peak == 0.0 {
        return 0.0;
    }
    let sum: f64 = v.iter().map(|x| (x.abs() / peak).powf(p)).sum();
    peak * sum.powf(1.0 / p)
}

/// Seed plus stream index; each stream is an independent ChaCha8 sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SeedSpec {
    pub seed: u64,
    pub stream_index: u64,
}

impl SeedSpec {
    pub const fn new(seed: u64, stream_index: u64) -> Self {
        Self { seed, stream_index }
    }

    pub fn rng(self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_index);
        rng
    }

    /// Same seed, another stream.
    pub fn stream(self, stream_index: u64) -> Self {
        Self {
            seed: self.seed,
            stream_index,
        }
    }
}

/// `len` i.i.d. standard-normal samples drawn from the given stream.
pub fn gaussian_vec(len: usize, seed: SeedSpec) -> Vec<f64> {
    let mut rng = seed.rng();
    (0..len).map(|_| StandardNormal.sample(&mut rng)).collect()
}

/// `n` i.i.d. standard-normal samples; deterministic in `seed`.
pub fn gaussian_block(n: usize, seed: SeedSpec) -> Result<Block> {
    if n == 0 {
        return Err(Error::Empty("gaussian block length"));
    }
    Block::new(gaussian_vec(n, seed))
}
