use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::basis::HermiteBasis;
use crate::error::{Error, Result};

/// Default grid spacing for L^p evaluation.
pub const DEFAULT_SPACING: f64 = 1.0 / 16.0;
/// Default buffer added to `sqrt(2N + d)` for the grid half-width.
pub const DEFAULT_MARGIN: f64 = 6.0;

/// Tensor uniform grid on `[-L, L]^d` with spacing `h`.
///
/// The node count per axis is odd, so the origin is always a node, and `L`
/// is rounded up to a multiple of `h`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    dim: usize,
    spacing: f64,
    half_steps: usize,
}

impl Grid {
    pub fn new(dim: usize, half_width: f64, spacing: f64) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(Error::Dimension(dim));
        }
        if !(spacing > 0.0) || !(half_width > 0.0) {
            return Err(Error::invalid(
                "grid spacing and half-width must be positive",
            ));
        }
        let half_steps = (half_width / spacing - 1e-9).ceil().max(1.0) as usize;
        Ok(Self {
            dim,
            spacing,
            half_steps,
        })
    }

    /// Grid with half-width `sqrt(2N + d) + margin` for the given basis.
    pub fn for_basis(basis: &HermiteBasis, spacing: f64, margin: f64) -> Result<Self> {
        let half_width = ((2 * basis.max_degree() + basis.dim()) as f64).sqrt() + margin;
        Self::new(basis.dim(), half_width, spacing)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn half_width(&self) -> f64 {
        self.half_steps as f64 * self.spacing
    }

    pub fn axis_len(&self) -> usize {
        2 * self.half_steps + 1
    }

    pub fn len(&self) -> usize {
        self.axis_len().pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn axis_nodes(&self) -> Vec<f64> {
        let l = self.half_steps as isize;
        (-l..=l).map(|i| i as f64 * self.spacing).collect()
    }

    /// Trapezoid weights along one axis.
    pub fn axis_weights(&self) -> Vec<f64> {
        let mut w = vec![self.spacing; self.axis_len()];
        w[0] *= 0.5;
        let last = w.len() - 1;
        w[last] *= 0.5;
        w
    }

    /// Tensor trapezoid weights, flattened row-major.
    pub fn weights(&self) -> Vec<f64> {
        let w = self.axis_weights();
        match self.dim {
            1 => w,
            _ => w
                .iter()
                .flat_map(|a| w.iter().map(move |b| a * b))
                .collect(),
        }
    }

    /// Coordinates of flat node `k`; the second slot is 0 in one dimension.
    pub fn point(&self, k: usize) -> [f64; 2] {
        let l = self.half_steps as f64;
        match self.dim {
            1 => [(k as f64 - l) * self.spacing, 0.0],
            _ => {
                let m = self.axis_len();
                [
                    ((k / m) as f64 - l) * self.spacing,
                    ((k % m) as f64 - l) * self.spacing,
                ]
            }
        }
    }

    pub fn points(&self) -> Vec<[f64; 2]> {
        (0..self.len()).map(|k| self.point(k)).collect()
    }

    /// Rejects grids that do not cover the classically allowed region of the basis.
    pub fn check_covers(&self, basis: &HermiteBasis) -> Result<()> {
        if self.dim != basis.dim() {
            return Err(Error::BasisMismatch(format!(
                "grid is {}-d, basis is {}-d",
                self.dim,
                basis.dim()
            )));
        }
        let required = basis.min_half_width();
        if self.half_width() + 1e-12 < required {
            return Err(Error::GridTooSmall {
                half_width: self.half_width(),
                required,
            });
        }
        Ok(())
    }
}

/// Samples of a function on a [`Grid`], flattened row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    grid: Grid,
    values: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(grid: Grid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::invalid(format!(
                "grid has {} nodes but {} values were given",
                grid.len(),
                values.len()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: Grid, f: impl Fn([f64; 2]) -> Complex64) -> Self {
        let values = (0..grid.len()).map(|k| f(grid.point(k))).collect();
        Self { grid, values }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    /// Pointwise product on the same grid.
    pub fn multiply(&self, other: &GridFunction) -> Result<GridFunction> {
        if self.grid != other.grid {
            return Err(Error::invalid(
                "pointwise product of functions on different grids",
            ));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .collect();
        Ok(GridFunction {
            grid: self.grid.clone(),
            values,
        })
    }

    /// `int f conj(g)` by the trapezoid rule.
    pub fn inner(&self, other: &GridFunction) -> Result<Complex64> {
        if self.grid != other.grid {
            return Err(Error::invalid(
                "inner product of functions on different grids",
            ));
        }
        Ok(self
            .grid
            .weights()
            .iter()
            .zip(self.values.iter().zip(&other.values))
            .map(|(w, (a, b))| a * b.conj() * *w)
            .sum())
    }

    pub fn max_abs_diff(&self, other: &GridFunction) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn origin_is_a_node() {
        let g = Grid::new(1, 3.01, 0.25).unwrap();
        let nodes = g.axis_nodes();
        assert_eq!(nodes.len() % 2, 1);
        assert_eq!(nodes[nodes.len() / 2], 0.0);
        assert!(g.half_width() >= 3.01);
        assert!((g.half_width() - 3.25).abs() < 1e-12);
    }

    #[test]
    fn points_2d_are_row_major() {
        let g = Grid::new(2, 1.0, 0.5).unwrap();
        assert_eq!(g.axis_len(), 5);
        assert_eq!(g.point(0), [-1.0, -1.0]);
        assert_eq!(g.point(1), [-1.0, -0.5]);
        assert_eq!(g.point(5), [-0.5, -1.0]);
        let total: f64 = g.weights().iter().sum();
        assert!((total - 4.0).abs() < 1e-12);
    }

    #[test]
    fn coverage_check() {
        let b = HermiteBasis::new(1, 32).unwrap();
        let small = Grid::new(1, 5.0, 0.1).unwrap();
        assert!(matches!(
            small.check_covers(&b),
            Err(Error::GridTooSmall { .. })
        ));
        let ok = Grid::for_basis(&b, 0.1, DEFAULT_MARGIN).unwrap();
        assert!(ok.check_covers(&b).is_ok());
    }
}
