//! Dense integral kernels of spectral multipliers and of `x^alpha ∇^beta m(sqrt(H))`.
//!
//! `K(x, y) = sum_n (T h_n)(x) m(sqrt(lambda_n)) h_n(y)` on a uniform grid,
//! assembled as `E_out A diag(m) E^T` where `E` holds the Hermite functions
//! at the grid nodes and `A` the exact ladder coefficients of `T`.

use ndarray::{Array1, Array2, Axis};

use super::partition::{pow2, DyadicPartition};
use super::symbol::SymbolFn;
use crate::error::{Error, Result};
use crate::hermite::{
    apply_poly_diff, hermite_table, Grid, HermiteBasis, SpectralCoefficients, DEFAULT_MARGIN,
    DEFAULT_SPACING,
};

/// Largest number of grid nodes a dense kernel may use.
pub const MAX_KERNEL_NODES: usize = 6000;

/// Symbols above this at the top of the resolved spectrum mark a kernel unresolved.
pub const RESOLVED_TOL: f64 = 1e-10;

/// Dense real kernel on a grid, with trapezoid weights for both variables.
#[derive(Clone, Debug)]
pub struct KernelMatrix {
    grid: Grid,
    entries: Array2<f64>,
    weights: Vec<f64>,
    resolved: bool,
    label: String,
}

impl KernelMatrix {
    pub fn new(grid: Grid, entries: Array2<f64>, label: impl Into<String>) -> Result<Self> {
        let n = grid.len();
        if entries.dim() != (n, n) {
            return Err(Error::invalid(format!(
                "kernel of shape {:?} on a grid with {n} nodes",
                entries.dim()
            )));
        }
        let weights = grid.weights();
        Ok(Self {
            grid,
            entries,
            weights,
            resolved: true,
            label: label.into(),
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// `K[[x, y]]`.
    pub fn entries(&self) -> &Array2<f64> {
        &self.entries
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// False when the symbol is not negligible at the top of the resolved spectrum.
    pub fn is_resolved(&self) -> bool {
        self.resolved
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// `max |K(x, y) - K(y, x)|`.
    pub fn max_asymmetry(&self) -> f64 {
        let k = &self.entries;
        let mut worst = 0.0f64;
        for i in 0..k.nrows() {
            for j in 0..i {
                worst = worst.max((k[[i, j]] - k[[j, i]]).abs());
            }
        }
        worst
    }

    /// `(Tf)(x) = int K(x, y) f(y) dy` for real samples `f`.
    pub fn apply(&self, f: &[f64]) -> Result<Vec<f64>> {
        if f.len() != self.grid.len() {
            return Err(Error::invalid(
                "sample count does not match the kernel grid",
            ));
        }
        let wf: Array1<f64> = f.iter().zip(&self.weights).map(|(a, w)| a * w).collect();
        Ok(self.entries.dot(&wf).to_vec())
    }

    /// `sup_y int |K(x, y)| dx`.
    pub fn column_norm(&self) -> f64 {
        let w = Array1::from(self.weights.clone());
        self.entries
            .mapv(f64::abs)
            .t()
            .dot(&w)
            .iter()
            .copied()
            .fold(0.0, f64::max)
    }

    /// `sup_x int |K(x, y)| dy`.
    pub fn row_norm(&self) -> f64 {
        let w = Array1::from(self.weights.clone());
        self.entries
            .mapv(f64::abs)
            .dot(&w)
            .iter()
            .copied()
            .fold(0.0, f64::max)
    }
}

fn check_grid(basis: &HermiteBasis, grid: &Grid) -> Result<()> {
    grid.check_covers(basis)?;
    let frequency = ((2 * basis.max_degree() + basis.dim()) as f64).sqrt();
    if grid.spacing() * frequency > std::f64::consts::PI {
        return Err(Error::GridTooCoarse {
            spacing: grid.spacing(),
            frequency,
        });
    }
    if grid.len() > MAX_KERNEL_NODES {
        return Err(Error::invalid(format!(
            "dense kernel on {} nodes exceeds the limit of {MAX_KERNEL_NODES}",
            grid.len()
        )));
    }
    Ok(())
}

/// `E[[i, a]] = h_{n_a}(x_i)` for the listed flat indices of `basis`.
fn eval_matrix(basis: &HermiteBasis, grid: &Grid, modes: &[usize]) -> Array2<f64> {
    let table = hermite_table(basis.max_degree(), &grid.axis_nodes());
    let m = grid.axis_len();
    let mut e = Array2::zeros((grid.len(), modes.len()));
    for (a, &k) in modes.iter().enumerate() {
        let [n0, n1] = basis.multi_index(k);
        match basis.dim() {
            1 => {
                for i in 0..m {
                    e[[i, a]] = table[[n0, i]];
                }
            }
            _ => {
                for i in 0..m {
                    let u = table[[n0, i]];
                    for j in 0..m {
                        e[[i * m + j, a]] = u * table[[n1, j]];
                    }
                }
            }
        }
    }
    e
}

fn symbol_values(m: &SymbolFn, basis: &HermiteBasis) -> (Vec<usize>, Vec<f64>) {
    (0..basis.len())
        .map(|k| (k, m.eval(basis.eigenvalue(k).sqrt())))
        .filter(|(_, v)| *v != 0.0)
        .unzip()
}

fn is_resolved(m: &SymbolFn, basis: &HermiteBasis) -> bool {
    let top = ((2 * basis.max_degree() + basis.dim()) as f64).sqrt();
    m.eval(top).abs() <= RESOLVED_TOL && m.sup_beyond(top) <= RESOLVED_TOL
}

/// Kernel of `m(sqrt(H))` truncated to `basis`.
pub fn multiplier_kernel(m: &SymbolFn, basis: HermiteBasis, grid: &Grid) -> Result<KernelMatrix> {
    check_grid(&basis, grid)?;
    let (modes, values) = symbol_values(m, &basis);
    let e = eval_matrix(&basis, grid, &modes);
    let mut scaled = e.clone();
    for (mut col, v) in scaled.axis_iter_mut(Axis(1)).zip(&values) {
        col *= *v;
    }
    let entries = scaled.dot(&e.t());
    let mut k = KernelMatrix::new(grid.clone(), entries, m.label())?;
    k.resolved = is_resolved(m, &basis);
    Ok(k)
}

/// Kernel of `x^alpha ∇^beta m(sqrt(H))` truncated to `basis`. The grid must
/// cover `basis` with `|alpha| + |beta|` extra degrees.
pub fn operator_kernel(
    alpha: &[usize],
    beta: &[usize],
    m: &SymbolFn,
    basis: HermiteBasis,
    grid: &Grid,
) -> Result<KernelMatrix> {
    let order: usize = alpha.iter().chain(beta).sum();
    let out_basis = basis.with_max_degree(basis.max_degree() + order);
    check_grid(&out_basis, grid)?;
    let (modes, values) = symbol_values(m, &basis);
    let mut a = Array2::zeros((out_basis.len(), modes.len()));
    for (col, (&k, &v)) in modes.iter().zip(&values).enumerate() {
        let n = basis.multi_index(k);
        let unit = SpectralCoefficients::unit(out_basis, &n[..basis.dim()])?;
        let image = apply_poly_diff(alpha, beta, &unit)?;
        debug_assert!(!image.is_lossy());
        for (row, c) in image.coeffs().iter().enumerate() {
            a[[row, col]] = c.re * v;
        }
    }
    let all: Vec<usize> = (0..out_basis.len()).collect();
    let e_out = eval_matrix(&out_basis, grid, &all);
    let e_in = eval_matrix(&basis, grid, &modes);
    let entries = e_out.dot(&a).dot(&e_in.t());
    let label = format!("x^{alpha:?} d^{beta:?} {}", m.label());
    let mut k = KernelMatrix::new(grid.clone(), entries, label)?;
    k.resolved = is_resolved(m, &basis);
    Ok(k)
}

/// Smallest `N` whose spectrum reaches past the support of `phi_j`, so that
/// `phi_j(sqrt(H))` is represented without truncation: `2N + d >= 4^{j + 1}`.
pub fn resolving_degree(p: &DyadicPartition, j: i32) -> usize {
    let need = pow2(2 * (j + 1)) - p.dim() as f64;
    (need / 2.0).ceil().max(0.0) as usize
}

/// Grid for dense kernels on `basis` with `extra` degrees of headroom. The
/// spacing resolves the top frequency `sqrt(2N + d)` about 1.4 times over or better.
pub fn kernel_grid(basis: &HermiteBasis, extra: usize) -> Result<Grid> {
    let wide = basis.with_max_degree(basis.max_degree() + extra);
    let top = ((2 * wide.max_degree() + wide.dim()) as f64).sqrt();
    let mut spacing = DEFAULT_SPACING;
    while spacing * top > 2.25 {
        spacing *= 0.5;
    }
    Grid::for_basis(&wide, spacing, DEFAULT_MARGIN)
}

/// `||T||_{L^1 -> L^1}` for `p = 1` and `||T||_{L^inf -> L^inf}` for `p = inf`.
pub fn operator_norm(k: &KernelMatrix, p: f64) -> Result<f64> {
    if p == 1.0 {
        Ok(k.column_norm())
    } else if p == f64::INFINITY {
        Ok(k.row_norm())
    } else {
        Err(Error::invalid(format!(
            "operator norms are computed for p = 1 or p = inf, not {p}"
        )))
    }
}

/// Riesz-Thorin upper bound `||T||_1^{1/p} ||T||_inf^{1 - 1/p}` for `1 <= p <= inf`.
pub fn interpolated_norm_bound(k: &KernelMatrix, p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::invalid(format!("exponent {p} below 1")));
    }
    let theta = if p.is_infinite() { 0.0 } else { 1.0 / p };
    let one = k.column_norm();
    let inf = k.row_norm();
    Ok(one.powf(theta) * inf.powf(1.0 - theta))
}
