use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tensor Hermite eigenbasis of `H = -Δ + |x|²` in one or two dimensions.
///
/// Multi-indices run over the cube `0 <= n_i <= max_degree`. Basis functions
/// are the L²-orthonormal products `h_{n_1}(x_1) h_{n_2}(x_2)` with
/// `H h_n = (2|n| + d) h_n`. Flat storage is row-major: the last axis is
/// contiguous.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HermiteBasis {
    dim: usize,
    max_degree: usize,
}

impl HermiteBasis {
    pub fn new(dim: usize, max_degree: usize) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(Error::Dimension(dim));
        }
        Ok(Self { dim, max_degree })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// Number of degrees per axis, `N + 1`.
    pub fn axis_len(&self) -> usize {
        self.max_degree + 1
    }

    pub fn len(&self) -> usize {
        self.axis_len().pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Same dimension, different maximal degree.
    pub fn with_max_degree(&self, max_degree: usize) -> Self {
        Self {
            dim: self.dim,
            max_degree,
        }
    }

    pub fn flat_index(&self, n: &[usize]) -> Result<usize> {
        if n.len() != self.dim || n.iter().any(|&k| k > self.max_degree) {
            return Err(Error::IndexOutOfRange {
                index: n.to_vec(),
                max_degree: self.max_degree,
            });
        }
        Ok(match self.dim {
            1 => n[0],
            _ => n[0] * self.axis_len() + n[1],
        })
    }

    /// Multi-index of a flat position; the second slot is 0 in one dimension.
    pub fn multi_index(&self, flat: usize) -> [usize; 2] {
        match self.dim {
            1 => [flat, 0],
            _ => [flat / self.axis_len(), flat % self.axis_len()],
        }
    }

    pub fn total_degree(&self, flat: usize) -> usize {
        let [a, b] = self.multi_index(flat);
        a + b
    }

    /// Eigenvalue `2|n| + d` of `H` on the basis function at `flat`.
    pub fn eigenvalue(&self, flat: usize) -> f64 {
        (2 * self.total_degree(flat) + self.dim) as f64
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        (0..self.len()).map(|k| self.eigenvalue(k)).collect()
    }

    /// Largest eigenvalue carried by the basis, `2 d N + d`.
    pub fn max_eigenvalue(&self) -> f64 {
        (2 * self.dim * self.max_degree + self.dim) as f64
    }

    /// Minimal grid half-width covering the classically allowed region of
    /// every basis function with a Gaussian-tail buffer: `sqrt(2N + d) + 4`.
    pub fn min_half_width(&self) -> f64 {
        ((2 * self.max_degree + self.dim) as f64).sqrt() + 4.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_dimension() {
        assert!(matches!(HermiteBasis::new(3, 4), Err(Error::Dimension(3))));
        assert!(HermiteBasis::new(0, 4).is_err());
    }

    #[test]
    fn index_round_trip_2d() {
        let b = HermiteBasis::new(2, 5).unwrap();
        assert_eq!(b.len(), 36);
        for flat in 0..b.len() {
            let [i, j] = b.multi_index(flat);
            assert_eq!(b.flat_index(&[i, j]).unwrap(), flat);
            assert_eq!(b.eigenvalue(flat), (2 * (i + j) + 2) as f64);
        }
        assert!(b.flat_index(&[6, 0]).is_err());
        assert!(b.flat_index(&[1]).is_err());
    }

    #[test]
    fn eigenvalues_1d() {
        let b = HermiteBasis::new(1, 3).unwrap();
        assert_eq!(b.eigenvalues(), vec![1.0, 3.0, 5.0, 7.0]);
        assert_eq!(b.max_eigenvalue(), 7.0);
    }
}
