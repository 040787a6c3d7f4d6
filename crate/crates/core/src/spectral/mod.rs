//! Dyadic partition of unity and spectral multipliers of the oscillator.

mod kernel;
mod multiplier;
pub(crate) mod partition;
mod symbol;
mod weighted;

pub use kernel::{
    interpolated_norm_bound, kernel_grid, multiplier_kernel, operator_kernel, operator_norm,
    resolving_degree, KernelMatrix, MAX_KERNEL_NODES, RESOLVED_TOL,
};
pub use multiplier::{
    apply_h_power, apply_multiplier, block_decomposition, low_block, lp_block, widened_block,
};
pub use partition::{build_partition, bump, pow2, DyadicPartition};
pub use symbol::{SymbolFn, SymbolSpec};
pub use weighted::{oscillator_split_ratios, poly_diff_ratio};
