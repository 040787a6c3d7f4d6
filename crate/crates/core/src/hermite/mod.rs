//! Hermite eigenbasis of the harmonic oscillator: evaluation, quadrature,
//! transforms and ladder operators.

mod basis;
mod coeffs;
mod functions;
mod grid;
mod ladder;
mod quadrature;
mod transform;

pub use basis::HermiteBasis;
pub use coeffs::SpectralCoefficients;
pub use functions::{hermite_function, hermite_functions_at, hermite_table};
pub use grid::{Grid, GridFunction, DEFAULT_MARGIN, DEFAULT_SPACING};
pub use ladder::{
    apply_derivative, apply_oscillator, apply_poly_diff, apply_position, with_headroom,
};
pub use quadrature::{gauss_hermite_rule, trapezoid_rule, QuadratureKind, QuadratureRule};
pub use transform::{analyze, analyze_fn, synthesize, TransformPlan};
