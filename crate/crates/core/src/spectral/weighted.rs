use super::multiplier::apply_h_power;
use crate::error::Result;
use crate::flags::{Flags, Ratio};
use crate::hermite::{apply_derivative, apply_poly_diff, apply_position, with_headroom, SpectralCoefficients};

/// `||x^alpha ∇^beta f||_{L^2} / ||H^{(|alpha| + |beta|)/2} f||_{L^2}`.
///
/// The weighted derivative is taken in a basis with `|alpha| + |beta|` degrees of headroom, so it is exact.
pub fn poly_diff_ratio(f: &SpectralCoefficients, alpha: &[usize], beta: &[usize]) -> Result<Ratio> {
    let m: usize = alpha.iter().chain(beta).sum();
    let num = apply_poly_diff(alpha, beta, &with_headroom(f, m))?;
    let den = apply_h_power(m as f64, f);
    Ok(Ratio::of(num.norm(), den.norm()).with(Flags::when(f.is_lossy(), Flags::LOSSY)))
}

/// `||H f|| / (||Δ f|| + |||x|² f||)` and its reciprocal, all in `L^2`.
pub fn oscillator_split_ratios(f: &SpectralCoefficients) -> Result<(Ratio, Ratio)> {
    let wide = with_headroom(f, 2);
    let mut lap = SpectralCoefficients::zeros(wide.basis());
    let mut xsq = SpectralCoefficients::zeros(wide.basis());
    for axis in 0..wide.basis().dim() {
        lap += &apply_derivative(axis, &apply_derivative(axis, &wide)?)?;
        xsq += &apply_position(axis, &apply_position(axis, &wide)?)?;
    }
    let h = apply_h_power(2.0, f).norm();
    let split = lap.norm() + xsq.norm();
    let flags = Flags::when(f.is_lossy(), Flags::LOSSY);
    Ok((Ratio::of(h, split).with(flags), Ratio::of(split, h).with(flags)))
}
