use num_complex::Complex64;

use super::heat::heat_apply;
use crate::besov::{BlockNorms, Exponent, LpEvaluator};
use crate::error::{Error, Result};
use crate::hermite::SpectralCoefficients;
use crate::spectral::{lp_block, DyadicPartition};

/// `||e^{-tH} f - f||_{B^s_{p,q}}` for each `t` in `times`.
pub fn continuity_deficit(
    f: &SpectralCoefficients,
    partition: &DyadicPartition,
    s: f64,
    p: Exponent,
    q: Exponent,
    times: &[f64],
    eval: &LpEvaluator,
) -> Result<Vec<f64>> {
    if q.is_infinite() {
        return Err(Error::invalid("strong continuity is only claimed for q < inf"));
    }
    times
        .iter()
        .map(|&t| {
            if t == 0.0 {
                return Ok(0.0);
            }
            let diff = &heat_apply(t, f)? - f;
            Ok(BlockNorms::compute(&diff, partition, p, eval)?.besov(s, q))
        })
        .collect()
}

/// `sum_j <phi_j(sqrt H)(e^{-tH} f - f), phi_j(sqrt H) g>`.
pub fn weak_continuity_pairing(
    f: &SpectralCoefficients,
    g: &SpectralCoefficients,
    partition: &DyadicPartition,
    t: f64,
) -> Result<Complex64> {
    if f.basis() != g.basis() {
        return Err(Error::BasisMismatch("pairing of different bases".into()));
    }
    partition.check_basis(&f.basis())?;
    let diff = &heat_apply(t, f)? - f;
    Ok(partition
        .blocks_for(&f.basis())
        .map(|j| lp_block(partition, j, &diff).inner(&lp_block(partition, j, g)))
        .sum())
}
