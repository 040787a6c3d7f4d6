//! Diagonal spectral multipliers `m(sqrt(H))` on Hermite coefficients.

use super::partition::DyadicPartition;
use super::symbol::SymbolFn;
use crate::hermite::SpectralCoefficients;

/// `c_n -> m(sqrt(2|n| + d)) c_n`.
pub fn apply_multiplier(m: &SymbolFn, c: &SpectralCoefficients) -> SpectralCoefficients {
    let basis = c.basis();
    c.map_diagonal(|k| m.eval(basis.eigenvalue(k).sqrt()))
}

fn apply_fn(c: &SpectralCoefficients, m: impl Fn(f64) -> f64) -> SpectralCoefficients {
    let basis = c.basis();
    c.map_diagonal(|k| m(basis.eigenvalue(k).sqrt()))
}

/// Block `f_j = phi_j(sqrt(H)) f`; zero for every `j < j0`.
pub fn lp_block(p: &DyadicPartition, j: i32, c: &SpectralCoefficients) -> SpectralCoefficients {
    if j < p.j0() {
        return SpectralCoefficients::zeros(c.basis()).with_lossy(c.is_lossy());
    }
    apply_fn(c, |l| p.phi(j, l))
}

/// `Phi_j(sqrt(H)) f`.
pub fn widened_block(
    p: &DyadicPartition,
    j: i32,
    c: &SpectralCoefficients,
) -> SpectralCoefficients {
    apply_fn(c, |l| p.widened(j, l))
}

/// `psi(sqrt(H)) f`.
pub fn low_block(p: &DyadicPartition, c: &SpectralCoefficients) -> SpectralCoefficients {
    apply_fn(c, |l| p.psi(l))
}

/// `H^{alpha/2} f`, i.e. `c_n -> (2|n| + d)^{alpha/2} c_n`.
pub fn apply_h_power(alpha: f64, c: &SpectralCoefficients) -> SpectralCoefficients {
    let basis = c.basis();
    c.map_diagonal(|k| basis.eigenvalue(k).powf(0.5 * alpha))
}

/// All blocks `f_j` for `j` in the partition's range for `c`'s basis.
pub fn block_decomposition(
    p: &DyadicPartition,
    c: &SpectralCoefficients,
) -> Vec<(i32, SpectralCoefficients)> {
    p.blocks_for(&c.basis())
        .map(|j| (j, lp_block(p, j, c)))
        .collect()
}
