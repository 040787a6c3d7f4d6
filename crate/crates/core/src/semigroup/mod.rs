//! Heat semigroup `e^{-tH}` and the estimates built on it.

mod continuity;
mod duhamel;
mod equivalence;
mod heat;
mod smoothing;

pub use continuity::{continuity_deficit, weak_continuity_pairing};
pub use duhamel::{
    duhamel_solve, free_trajectory, graded_grid, max_reg_ratio, MaxReg, MaxRegParams, Trajectory,
};
pub use equivalence::{
    equivalence_ratio, gregory_weights, semigroup_norm, semigroup_norms, SemigroupNorm, SemigroupNormParams, XKind,
    DEFAULT_TIME_NODES, DEFAULT_T_MIN,
};
pub use heat::{gaussian_bound_ratio, heat_apply, mehler_kernel, mehler_log_kernel, MEHLER_MIN_T};
pub use smoothing::{
    heat_bound_ratio, least_squares, log_space, smoothing_rate_fit, smoothing_ratio, RateFit,
    SmoothingParams, MIN_BROADBAND_BLOCKS,
};
