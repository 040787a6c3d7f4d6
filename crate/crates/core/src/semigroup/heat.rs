use ndarray::Array2;

use crate::error::{Error, Result};
use crate::hermite::{Grid, SpectralCoefficients};
use crate::spectral::KernelMatrix;

/// Smallest time accepted by the closed-form kernel.
pub const MEHLER_MIN_T: f64 = 1e-6;

/// `e^{-tH} f`: `c_n -> e^{-t(2|n| + d)} c_n`.
pub fn heat_apply(t: f64, c: &SpectralCoefficients) -> Result<SpectralCoefficients> {
    if !(t >= 0.0) {
        return Err(Error::invalid(format!("heat flow needs t >= 0, got {t}")));
    }
    let basis = c.basis();
    Ok(c.map_diagonal(|k| (-t * basis.eigenvalue(k)).exp()))
}

fn check_time(t: f64) -> Result<()> {
    if !(t > 0.0) {
        return Err(Error::invalid(format!("kernel time must be positive, got {t}")));
    }
    if t < MEHLER_MIN_T {
        return Err(Error::invalid(format!(
            "kernel time {t} below {MEHLER_MIN_T}; the closed form is ill-conditioned there"
        )));
    }
    Ok(())
}

/// `log e^{-tH}(x, y)` from the closed form.
pub fn mehler_log_kernel(t: f64, x: &[f64], y: &[f64]) -> f64 {
    let d = x.len() as f64;
    let s = (2.0 * t).sinh();
    let coth = 1.0 / (2.0 * t).tanh();
    let (mut sq, mut cross) = (0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sq += a * a + b * b;
        cross += a * b;
    }
    -0.5 * d * (2.0 * std::f64::consts::PI * s).ln() - 0.5 * coth * sq + cross / s
}

/// Closed-form kernel of `e^{-tH}`:
/// `(2 pi sinh 2t)^{-d/2} exp(-(cosh 2t (|x|² + |y|²) - 2 x.y) / (2 sinh 2t))`.
pub fn mehler_kernel(t: f64, grid: &Grid) -> Result<KernelMatrix> {
    check_time(t)?;
    let d = grid.dim();
    let pts = grid.points();
    let n = pts.len();
    let mut k = Array2::zeros((n, n));
    for i in 0..n {
        for j in 0..=i {
            let v = mehler_log_kernel(t, &pts[i][..d], &pts[j][..d]).exp();
            k[[i, j]] = v;
            k[[j, i]] = v;
        }
    }
    KernelMatrix::new(grid.clone(), k, format!("mehler({t})"))
}

/// `max_{x,y} e^{-tH}(x, y) t^{d/2} e^{|x - y|² / (C t)}` over the grid.
pub fn gaussian_bound_ratio(t: f64, grid: &Grid, c: f64) -> Result<f64> {
    check_time(t)?;
    if !(c > 0.0) {
        return Err(Error::invalid("Gaussian bound constant must be positive"));
    }
    let d = grid.dim();
    let pts = grid.points();
    let mut worst = f64::NEG_INFINITY;
    for (i, x) in pts.iter().enumerate() {
        for y in &pts[..=i] {
            let dist2: f64 = x[..d].iter().zip(&y[..d]).map(|(a, b)| (a - b) * (a - b)).sum();
            let log = mehler_log_kernel(t, &x[..d], &y[..d])
                + 0.5 * d as f64 * t.ln()
                + dist2 / (c * t);
            worst = worst.max(log);
        }
    }
    Ok(worst.exp())
}
