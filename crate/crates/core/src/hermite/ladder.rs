//! Exact coefficient-space actions of `x_k` and `∂_k`.
//!
//! ```text
//! x h_n = (sqrt(n) h_{n-1} + sqrt(n+1) h_{n+1}) / sqrt(2)
//! ∂ h_n = (sqrt(n) h_{n-1} - sqrt(n+1) h_{n+1}) / sqrt(2)
//! ```
//!
//! Both raise the degree along the axis by one. Output stays in the input
//! basis; mass pushed past the top degree is dropped and the result is
//! marked lossy. Use [`with_headroom`] first to keep the action exact.

use super::coeffs::SpectralCoefficients;
use crate::error::{Error, Result};

#[derive(Clone, Copy)]
enum Ladder {
    Position,
    Derivative,
}

fn apply(axis: usize, c: &SpectralCoefficients, kind: Ladder) -> Result<SpectralCoefficients> {
    let basis = c.basis();
    if axis >= basis.dim() {
        return Err(Error::invalid(format!(
            "axis {axis} out of range for a {}-d basis",
            basis.dim()
        )));
    }
    let top = basis.max_degree();
    let sign = match kind {
        Ladder::Position => 1.0,
        Ladder::Derivative => -1.0,
    };
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = SpectralCoefficients::zeros(basis);
    let mut lossy = false;
    let src = c.coeffs();
    let stride = if basis.dim() == 2 && axis == 0 {
        basis.axis_len()
    } else {
        1
    };
    {
        let dst = out.coeffs_mut();
        for (k, &v) in src.iter().enumerate() {
            if v.re == 0.0 && v.im == 0.0 {
                continue;
            }
            let n = basis.multi_index(k)[axis];
            if n > 0 {
                dst[k - stride] += v * ((n as f64).sqrt() * inv_sqrt2);
            }
            if n < top {
                dst[k + stride] += v * (sign * ((n + 1) as f64).sqrt() * inv_sqrt2);
            } else {
                lossy = true;
            }
        }
    }
    Ok(out.with_lossy(lossy || c.is_lossy()))
}

/// Multiplication by `x_axis`.
pub fn apply_position(axis: usize, c: &SpectralCoefficients) -> Result<SpectralCoefficients> {
    apply(axis, c, Ladder::Position)
}

/// Partial derivative along `axis`.
pub fn apply_derivative(axis: usize, c: &SpectralCoefficients) -> Result<SpectralCoefficients> {
    apply(axis, c, Ladder::Derivative)
}

/// `x^alpha ∇^beta f`: the derivatives act first, then the monomial.
pub fn apply_poly_diff(
    alpha: &[usize],
    beta: &[usize],
    c: &SpectralCoefficients,
) -> Result<SpectralCoefficients> {
    let dim = c.basis().dim();
    if alpha.len() != dim || beta.len() != dim {
        return Err(Error::invalid(format!(
            "multi-indices must have length {dim}"
        )));
    }
    let mut out = c.clone();
    for (axis, &k) in beta.iter().enumerate() {
        for _ in 0..k {
            out = apply_derivative(axis, &out)?;
        }
    }
    for (axis, &k) in alpha.iter().enumerate() {
        for _ in 0..k {
            out = apply_position(axis, &out)?;
        }
    }
    Ok(out)
}

/// Same expansion in a basis with `extra` more degrees per axis.
pub fn with_headroom(c: &SpectralCoefficients, extra: usize) -> SpectralCoefficients {
    let basis = c.basis().with_max_degree(c.basis().max_degree() + extra);
    c.resize(basis).expect("same dimension")
}

/// `(-Δ + |x|²) f` through the ladder algebra, in a basis with two degrees of headroom.
pub fn apply_oscillator(c: &SpectralCoefficients) -> Result<SpectralCoefficients> {
    let wide = with_headroom(c, 2);
    let dim = wide.basis().dim();
    let mut out = SpectralCoefficients::zeros(wide.basis());
    for axis in 0..dim {
        let dd = apply_derivative(axis, &apply_derivative(axis, &wide)?)?;
        let xx = apply_position(axis, &apply_position(axis, &wide)?)?;
        out += &(&xx - &dd);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermite::basis::HermiteBasis;
    use num_complex::Complex64;

    fn b1(n: usize) -> HermiteBasis {
        HermiteBasis::new(1, n).unwrap()
    }

    #[test]
    fn position_on_ground_state() {
        let h0 = SpectralCoefficients::unit(b1(4), &[0]).unwrap();
        let out = apply_position(0, &h0).unwrap();
        assert!((out.get(&[1]).unwrap().re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((out.norm() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert!(!out.is_lossy());
    }

    #[test]
    fn derivative_of_h1() {
        let h1 = SpectralCoefficients::unit(b1(4), &[1]).unwrap();
        let out = apply_derivative(0, &h1).unwrap();
        assert!((out.get(&[0]).unwrap().re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((out.get(&[2]).unwrap().re + 1.0).abs() < 1e-15);
    }

    #[test]
    fn oscillator_eigenrelation() {
        let h5 = SpectralCoefficients::unit(b1(8), &[5]).unwrap();
        let out = apply_oscillator(&h5).unwrap();
        let want = with_headroom(&h5, 2).scale(Complex64::new(11.0, 0.0));
        assert!(out.max_abs_diff(&want) < 1e-12);
    }

    #[test]
    fn truncation_is_flagged() {
        let top = SpectralCoefficients::unit(b1(3), &[3]).unwrap();
        assert!(apply_position(0, &top).unwrap().is_lossy());
        let wide = with_headroom(&top, 1);
        assert!(!apply_position(0, &wide).unwrap().is_lossy());
    }

    #[test]
    fn x_d_of_ground_state() {
        let h0 = SpectralCoefficients::unit(b1(4), &[0]).unwrap();
        let out = apply_poly_diff(&[1], &[1], &h0).unwrap();
        // x ∂ h0 = -x^2 h0 = -(h0 + sqrt(2) h2) / 2
        assert!((out.get(&[0]).unwrap().re + 0.5).abs() < 1e-15);
        assert!((out.get(&[2]).unwrap().re + std::f64::consts::SQRT_2 / 2.0).abs() < 1e-15);
    }

    #[test]
    fn axis_validation() {
        let h0 = SpectralCoefficients::unit(b1(2), &[0]).unwrap();
        assert!(apply_position(1, &h0).is_err());
        assert!(apply_poly_diff(&[1, 0], &[0, 0], &h0).is_err());
    }

    #[test]
    fn two_d_axes_are_independent() {
        let b = HermiteBasis::new(2, 4).unwrap();
        let c = SpectralCoefficients::unit(b, &[1, 2]).unwrap();
        let x0 = apply_position(0, &c).unwrap();
        assert!((x0.get(&[0, 2]).unwrap().re - (0.5_f64).sqrt()).abs() < 1e-15);
        assert!((x0.get(&[2, 2]).unwrap().re - 1.0).abs() < 1e-15);
        let x1 = apply_position(1, &c).unwrap();
        assert!((x1.get(&[1, 1]).unwrap().re - 1.0).abs() < 1e-15);
        assert!((x1.get(&[1, 3]).unwrap().re - (1.5_f64).sqrt()).abs() < 1e-15);
    }
}
