//! Max-scaled block quantization, magnitude sparsity, their two composition
//! orders, and audits of how the errors of the two interact.

pub mod audit;
pub mod compose;
pub mod error;
pub mod propagate;
pub mod quantize;
pub mod sparsify;
pub mod tensorcore;

pub use compose::{compose, compose_tensor, correction_vector, CompositionResult, Order};
pub use error::{Error, Result};
pub use propagate::{
    mean_trace, simulate_seeds, simulate_stack, Activation, PropagationTrace, StackConfig,
};
pub use quantize::{
    block_scale, quant_error, quantize_block, quantize_tensor, step_bound, tensor_step_bound,
    BlockGrid, ExponentMode, Family, FormatPreset, MantissaClamp, MxfpConfig, QuantFormat,
    PRESET_NAMES,
};
pub use sparsify::{
    select_mask, sparsify, sparsity_error, SparsityKind, SparsityMask, SparsityPattern, TieMode,
};
pub use tensorcore::{gaussian_block, gaussian_vec, lp_norm, Block, NormKind, SeedSpec, Tensor};
