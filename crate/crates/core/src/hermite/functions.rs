//! Orthonormal Hermite functions `h_n(x) = (2^n n! sqrt(pi))^{-1/2} H_n(x) e^{-x^2/2}`.
//!
//! Values are produced by the normalized three-term recurrence
//!
//! ```text
//! h_{n+1}(x) = sqrt(2/(n+1)) x h_n(x) - sqrt(n/(n+1)) h_{n-1}(x)
//! ```
//!
//! which never forms a Hermite polynomial. The Gaussian factor is carried as a
//! separate logarithmic scale so that the recurrence also starts correctly at
//! abscissae where `e^{-x^2/2}` underflows (|x| > ~38), which matters for high
//! degrees whose oscillatory region extends that far.

use ndarray::Array2;

const PI_POW_M_QUARTER: f64 = 0.751_125_544_464_942_5;
const RESCALE_AT: f64 = 1e150;
const LN_RESCALE: f64 = 345.387_763_949_107; // ln(1e150)

/// Fills `out[k] = h_k(x)` for `k = 0..out.len()`.
pub fn hermite_functions_at(x: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    let mut log_scale = -0.5 * x * x;
    let mut factor = log_scale.exp();
    let mut prev = 0.0;
    let mut cur = PI_POW_M_QUARTER;
    out[0] = cur * factor;
    for k in 0..out.len() - 1 {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * x * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE_AT {
            cur /= RESCALE_AT;
            prev /= RESCALE_AT;
            log_scale += LN_RESCALE;
            factor = log_scale.exp();
        }
        out[k + 1] = cur * factor;
    }
}

/// Single orthonormal Hermite function `h_n(x)`.
pub fn hermite_function(n: usize, x: f64) -> f64 {
    let mut buf = vec![0.0; n + 1];
    hermite_functions_at(x, &mut buf);
    buf[n]
}

/// Table `T[[n, i]] = h_n(xs[i])` for `n = 0..=max_degree`.
pub fn hermite_table(max_degree: usize, xs: &[f64]) -> Array2<f64> {
    let mut table = Array2::zeros((max_degree + 1, xs.len()));
    let mut buf = vec![0.0; max_degree + 1];
    for (i, &x) in xs.iter().enumerate() {
        hermite_functions_at(x, &mut buf);
        for (n, v) in buf.iter().enumerate() {
            table[[n, i]] = *v;
        }
    }
    table
}
