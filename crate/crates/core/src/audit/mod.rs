//! Empirical checks of the composition theorems.
//!
//! * [`tensor`]: per-block orthogonality audits of `q∘s` and `s∘q`.
//! * [`dot`]: the dot-product error decomposition and its deviation ratio.
//! * [`deviation`]: seeded Monte Carlo over random activation/weight blocks.
//! * [`collision`]: how many distinct values survive quantization.
//! * [`threshold`]: the metric-level orthogonality threshold.

pub mod collision;
pub mod deviation;
pub mod dot;
pub mod tensor;
pub mod threshold;

pub use collision::{collision_report, CollisionReport};
pub use deviation::{
    deviation_experiment, DeviationConfig, DeviationExperiment, Histogram, HistogramSpec,
    TermShares,
};
pub use dot::{audit_dot, DotAudit};
pub use tensor::{
    audit_block, audit_block_norms, audit_tensor, audit_tensor_norms, BlockAudit, TensorAudit,
};
pub use threshold::{orthogonality_threshold, Direction, ThresholdReport, Verdict};

/// Slack for the norm inequalities, relative to `max(1, rhs)`.
pub const THEOREM_TOL: f64 = 1e-9;

/// Slack for the L1 order comparison, relative to `max(1, rhs)`.
pub const ORDER_TOL: f64 = 1e-12;

pub(crate) fn holds(lhs: f64, rhs: f64, tol: f64) -> bool {
    lhs <= rhs + tol * rhs.abs().max(1.0)
}
