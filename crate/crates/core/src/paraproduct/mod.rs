//! Products of Hermite expansions, the paraproduct split and bilinear estimates.

mod bony;
mod estimates;
mod product;

pub use bony::{bony_decompose, BonyPieces, DEFAULT_N0};
pub use estimates::{
    lowhigh_estimate_ratio, negative_positive_product_ratio, negative_s_lowhigh_ratio,
    product_estimate_ratio, resonant_estimate_ratio, Bilinear, LowHighParams,
    NegPosProductParams, NegativeLowHighParams, ProductParams, ResonantParams,
};
pub use product::{Product, ProductEngine, ALIASING_TOL};
