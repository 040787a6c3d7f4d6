//! Smooth dyadic partition of unity on the spectrum of `sqrt(H)`.
//!
//! The bump is `phi_0(l) = rho(l) / sum_k rho(2^{-k} l)` with
//! `rho(l) = g(l - 1/2) g(2 - l)` and `g(t) = e^{-1/t}` for `t > 0`. The
//! normalizing sum is invariant under `l -> 2l`, so `sum_j phi_0(2^{-j} l) = 1`
//! for every `l > 0`, and `phi_0(1) = 1` exactly because `rho` vanishes at the
//! endpoints 1/2 and 2.

use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermite::HermiteBasis;

fn g(t: f64) -> f64 {
    if t > 0.0 {
        (-1.0 / t).exp()
    } else {
        0.0
    }
}

fn rho(l: f64) -> f64 {
    g(l - 0.5) * g(2.0 - l)
}

/// The bump `phi_0`, supported in `[1/2, 2]`.
pub fn bump(l: f64) -> f64 {
    if !(l > 0.5 && l < 2.0) {
        return 0.0;
    }
    let num = rho(l);
    if num == 0.0 {
        return 0.0;
    }
    // Only k in {-1, 0, 1} can put 2^{-k} l inside (1/2, 2).
    let den = rho(2.0 * l) + num + rho(0.5 * l);
    num / den
}

/// `2^j` for integer `j`, exact in binary floating point.
pub fn pow2(j: i32) -> f64 {
    2.0_f64.powi(j)
}

/// Dyadic partition `phi_j(l) = phi_0(2^{-j} l)` with block indexing for
/// `sqrt(H)` in dimension `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DyadicPartition {
    dim: usize,
    j0: i32,
    j_max: i32,
}

/// Largest integer `j0` with `2^{j0 + 1} <= d = inf spectrum of H`.
fn base_index(dim: usize) -> i32 {
    let mut j = -8;
    while pow2(j + 2) <= dim as f64 {
        j += 1;
    }
    j
}

/// Largest `j` with `2^{j - 1} <= sqrt(lambda_max)`.
fn top_index(max_eigenvalue: f64) -> i32 {
    let top = max_eigenvalue.sqrt();
    let mut j = -1;
    while pow2(j) <= top {
        j += 1;
    }
    j
}

impl DyadicPartition {
    /// Partition for `d` with blocks resolved by a basis of maximal degree `N`.
    pub fn new(dim: usize, max_degree: usize) -> Result<Self> {
        let basis = HermiteBasis::new(dim, max_degree)?;
        Ok(Self::for_basis(&basis))
    }

    pub fn for_basis(basis: &HermiteBasis) -> Self {
        Self {
            dim: basis.dim(),
            j0: base_index(basis.dim()),
            j_max: top_index(basis.max_eigenvalue()),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn j0(&self) -> i32 {
        self.j0
    }

    pub fn j_max(&self) -> i32 {
        self.j_max
    }

    /// Largest block touched by the spectrum of `basis`.
    pub fn j_max_for(&self, basis: &HermiteBasis) -> i32 {
        top_index(basis.max_eigenvalue())
    }

    pub fn blocks(&self) -> RangeInclusive<i32> {
        self.j0..=self.j_max
    }

    pub fn blocks_for(&self, basis: &HermiteBasis) -> RangeInclusive<i32> {
        self.j0..=self.j_max_for(basis)
    }

    pub fn check_basis(&self, basis: &HermiteBasis) -> Result<()> {
        if basis.dim() != self.dim {
            return Err(Error::BasisMismatch(format!(
                "partition built for d = {}, basis has d = {}",
                self.dim,
                basis.dim()
            )));
        }
        Ok(())
    }

    /// `phi_j(l)`.
    pub fn phi(&self, j: i32, l: f64) -> f64 {
        bump(l * pow2(-j))
    }

    /// `Phi_j = phi_{j-1} + phi_j + phi_{j+1}`.
    pub fn widened(&self, j: i32, l: f64) -> f64 {
        self.phi(j - 1, l) + self.phi(j, l) + self.phi(j + 1, l)
    }

    /// Low part `psi = 1 - sum_{j >= 1} phi_j`: 1 on `[0, 1]`, `phi_0` on `(1, 2)`, 0 beyond.
    pub fn psi(&self, l: f64) -> f64 {
        if l <= 1.0 {
            1.0
        } else {
            bump(l)
        }
    }

    /// Support of `phi_j`, `[2^{j-1}, 2^{j+1}]`.
    pub fn support(&self, j: i32) -> (f64, f64) {
        (pow2(j - 1), pow2(j + 1))
    }
}

/// Builds the partition for dimension `d` and maximal degree `N`.
pub fn build_partition(dim: usize, max_degree: usize) -> Result<DyadicPartition> {
    DyadicPartition::new(dim, max_degree)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bump_values() {
        assert_eq!(bump(1.0), 1.0);
        assert_eq!(bump(0.4), 0.0);
        assert_eq!(bump(0.5), 0.0);
        assert_eq!(bump(2.0), 0.0);
        assert_eq!(bump(2.5), 0.0);
        assert!(bump(1.5) > 0.0 && bump(1.5) < 1.0);
    }

    #[test]
    fn base_index_follows_bottom_of_spectrum() {
        assert_eq!(build_partition(1, 10).unwrap().j0(), -1);
        assert_eq!(build_partition(2, 10).unwrap().j0(), 0);
    }

    #[test]
    fn top_index_1d() {
        // sqrt(2*128 + 1) = 16.03 -> 2^{j-1} <= 16.03 up to j = 5
        assert_eq!(build_partition(1, 128).unwrap().j_max(), 5);
        // sqrt(2*7 + 1) = 3.87 -> j = 2
        assert_eq!(build_partition(1, 7).unwrap().j_max(), 2);
    }

    #[test]
    fn sum_over_small_range() {
        let p = build_partition(1, 64).unwrap();
        for i in 0..=600 {
            let l = 1.0 + 6.0 * i as f64 / 600.0;
            let s: f64 = (-3..=3).map(|j| p.phi(j, l)).sum();
            assert!((s - 1.0).abs() < 1e-12, "l = {l}: {s}");
        }
    }

    #[test]
    fn psi_completes_positive_blocks() {
        let p = build_partition(1, 64).unwrap();
        for i in 0..400 {
            let l = 0.01 + i as f64 * 0.05;
            let s = p.psi(l) + (1..12).map(|j| p.phi(j, l)).sum::<f64>();
            assert!((s - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn widened_is_one_on_support() {
        let p = build_partition(1, 64).unwrap();
        for j in -1..6 {
            let (lo, hi) = p.support(j);
            for i in 1..100 {
                let l = lo + (hi - lo) * i as f64 / 100.0;
                assert!((p.widened(j, l) - 1.0).abs() < 1e-14);
            }
        }
    }
}
