//! L^p and Besov norms built on the dyadic spectral blocks of the oscillator.

mod checks;
mod exponent;
mod lp;
mod norm;

pub use checks::{
    duality_pairing, embedding_ratio, interpolation_check, lifting_ratio, sandwich_check,
    InterpolationParams,
};
pub(crate) use exponent::require_holder;
pub use exponent::{holder_ok, Exponent};
pub use lp::{lp_norm, LpEvaluator};
pub use norm::{besov_norm, BesovParams, BlockNorms, BlockProfile, TAIL_TOL};
