//! Forward and inverse Hermite transforms.
//!
//! Dense `O(N M)` per axis matrix products against a precomputed table of
//! Hermite function values. The trapezoid rule on a uniform grid is
//! spectrally accurate for the products `f h_n` as long as the spacing
//! resolves their oscillation, so the grid doubles as the analysis rule.

use ndarray::{s, Array1, Array2, ArrayView2};
use num_complex::Complex64;

use super::basis::HermiteBasis;
use super::coeffs::SpectralCoefficients;
use super::functions::hermite_table;
use super::grid::{Grid, GridFunction};
use super::quadrature::gauss_hermite_rule;
use crate::error::{Error, Result};

/// Precomputed transform between a basis and a grid.
#[derive(Clone, Debug)]
pub struct TransformPlan {
    basis: HermiteBasis,
    grid: Grid,
    table: Array2<f64>,
    weights: Vec<f64>,
}

impl TransformPlan {
    pub fn new(basis: HermiteBasis, grid: Grid) -> Result<Self> {
        grid.check_covers(&basis)?;
        let table = hermite_table(basis.max_degree(), &grid.axis_nodes());
        let weights = grid.axis_weights();
        Ok(Self {
            basis,
            grid,
            table,
            weights,
        })
    }

    pub fn basis(&self) -> HermiteBasis {
        self.basis
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// `T[[n, i]] = h_n(x_i)` along one axis.
    pub fn table(&self) -> &Array2<f64> {
        &self.table
    }

    fn check_fits(&self, basis: &HermiteBasis) -> Result<()> {
        if basis.dim() != self.basis.dim() || basis.max_degree() > self.basis.max_degree() {
            return Err(Error::BasisMismatch(format!(
                "plan for {:?} cannot transform {:?}",
                self.basis, basis
            )));
        }
        Ok(())
    }

    /// Pointwise values `sum_n c_n h_n(x)` on the plan's grid.
    pub fn synthesize(&self, c: &SpectralCoefficients) -> Result<GridFunction> {
        let basis = c.basis();
        self.check_fits(&basis)?;
        let top = c.effective_degree();
        let rows = self.table.slice(s![..=top, ..]);
        let values = match basis.dim() {
            1 => {
                let (re, im) = split(c.coeffs()[..=top].iter().copied());
                let vr = rows.t().dot(&re);
                let vi = rows.t().dot(&im);
                vr.iter()
                    .zip(vi.iter())
                    .map(|(a, b)| Complex64::new(*a, *b))
                    .collect()
            }
            _ => {
                let a = basis.axis_len();
                let (re, im) = split_matrix(c.coeffs(), a, top + 1);
                let vr = rows.t().dot(&re.dot(&rows));
                let vi = rows.t().dot(&im.dot(&rows));
                vr.iter()
                    .zip(vi.iter())
                    .map(|(a, b)| Complex64::new(*a, *b))
                    .collect()
            }
        };
        GridFunction::new(self.grid.clone(), values)
    }

    /// Coefficients `c_n = int f h_n` in the plan's basis.
    pub fn analyze(&self, f: &GridFunction) -> Result<SpectralCoefficients> {
        self.analyze_into(f, self.basis)
    }

    /// Coefficients in a basis no larger than the plan's.
    pub fn analyze_into(
        &self,
        f: &GridFunction,
        basis: HermiteBasis,
    ) -> Result<SpectralCoefficients> {
        self.check_fits(&basis)?;
        if f.grid() != &self.grid {
            return Err(Error::invalid(
                "grid function does not live on the plan's grid",
            ));
        }
        let rows = self.table.slice(s![..=basis.max_degree(), ..]);
        let coeffs: Vec<Complex64> = match basis.dim() {
            1 => {
                let (re, im) = split(f.values().iter().zip(&self.weights).map(|(v, w)| v * *w));
                let cr = rows.dot(&re);
                let ci = rows.dot(&im);
                cr.iter()
                    .zip(ci.iter())
                    .map(|(a, b)| Complex64::new(*a, *b))
                    .collect()
            }
            _ => {
                let m = self.grid.axis_len();
                let w = &self.weights;
                let mut re = Array2::zeros((m, m));
                let mut im = Array2::zeros((m, m));
                for (k, v) in f.values().iter().enumerate() {
                    let (i, j) = (k / m, k % m);
                    let v = v * (w[i] * w[j]);
                    re[[i, j]] = v.re;
                    im[[i, j]] = v.im;
                }
                let cr = rows.dot(&re.dot(&rows.t()));
                let ci = rows.dot(&im.dot(&rows.t()));
                cr.iter()
                    .zip(ci.iter())
                    .map(|(a, b)| Complex64::new(*a, *b))
                    .collect()
            }
        };
        SpectralCoefficients::from_vec(basis, coeffs)
    }
}

fn split(values: impl Iterator<Item = Complex64>) -> (Array1<f64>, Array1<f64>) {
    let (re, im): (Vec<f64>, Vec<f64>) = values.map(|c| (c.re, c.im)).unzip();
    (Array1::from(re), Array1::from(im))
}

/// Leading `take x take` block of a row-major `axis x axis` coefficient tensor.
fn split_matrix(coeffs: &[Complex64], axis: usize, take: usize) -> (Array2<f64>, Array2<f64>) {
    let mut re = Array2::zeros((take, take));
    let mut im = Array2::zeros((take, take));
    for i in 0..take {
        for j in 0..take {
            let c = coeffs[i * axis + j];
            re[[i, j]] = c.re;
            im[[i, j]] = c.im;
        }
    }
    (re, im)
}

/// Synthesizes on a fresh grid.
pub fn synthesize(c: &SpectralCoefficients, grid: &Grid) -> Result<GridFunction> {
    TransformPlan::new(c.basis(), grid.clone())?.synthesize(c)
}

/// Projects grid samples onto the basis.
pub fn analyze(f: &GridFunction, basis: HermiteBasis) -> Result<SpectralCoefficients> {
    TransformPlan::new(basis, f.grid().clone())?.analyze(f)
}

/// Projects a callable onto the basis with a tensor Gauss-Hermite rule of the
/// given order per axis. The order must be at least `2N + 1`.
pub fn analyze_fn(
    f: impl Fn([f64; 2]) -> Complex64,
    basis: HermiteBasis,
    order: usize,
) -> Result<SpectralCoefficients> {
    let n = basis.max_degree();
    if order < 2 * n + 1 {
        return Err(Error::invalid(format!(
            "quadrature order {order} below 2N+1 = {}",
            2 * n + 1
        )));
    }
    let rule = gauss_hermite_rule(order)?;
    let table = hermite_table(n, &rule.nodes);
    let a = basis.axis_len();
    let mut coeffs = vec![Complex64::new(0.0, 0.0); basis.len()];
    match basis.dim() {
        1 => {
            for (i, (&x, &w)) in rule.nodes.iter().zip(&rule.scaled_weights).enumerate() {
                let v = f([x, 0.0]) * w;
                for (k, c) in coeffs.iter_mut().enumerate() {
                    *c += v * table[[k, i]];
                }
            }
        }
        _ => {
            let m = rule.len();
            let mut re = Array2::zeros((m, m));
            let mut im = Array2::zeros((m, m));
            for i in 0..m {
                for j in 0..m {
                    let v = f([rule.nodes[i], rule.nodes[j]])
                        * (rule.scaled_weights[i] * rule.scaled_weights[j]);
                    re[[i, j]] = v.re;
                    im[[i, j]] = v.im;
                }
            }
            let t: ArrayView2<f64> = table.view();
            let cr = t.dot(&re.dot(&t.t()));
            let ci = t.dot(&im.dot(&t.t()));
            for i in 0..a {
                for j in 0..a {
                    coeffs[i * a + j] = Complex64::new(cr[[i, j]], ci[[i, j]]);
                }
            }
        }
    }
    SpectralCoefficients::from_vec(basis, coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermite::grid::{DEFAULT_MARGIN, DEFAULT_SPACING};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn plan(dim: usize, n: usize) -> TransformPlan {
        let b = HermiteBasis::new(dim, n).unwrap();
        let g = Grid::for_basis(&b, DEFAULT_SPACING, DEFAULT_MARGIN).unwrap();
        TransformPlan::new(b, g).unwrap()
    }

    #[test]
    fn unit_vector_analysis() {
        let p = plan(1, 20);
        let h3 = SpectralCoefficients::unit(p.basis(), &[3]).unwrap();
        let back = p.analyze(&p.synthesize(&h3).unwrap()).unwrap();
        assert!(back.max_abs_diff(&h3) < 1e-10);
    }

    #[test]
    fn ground_state_is_gaussian() {
        let p = plan(1, 8);
        let c = SpectralCoefficients::unit(p.basis(), &[0]).unwrap();
        let f = p.synthesize(&c).unwrap();
        for (k, v) in f.values().iter().enumerate() {
            let x = f.grid().point(k)[0];
            let want = std::f64::consts::PI.powf(-0.25) * (-0.5 * x * x).exp();
            assert!((v.re - want).abs() < 1e-14 && v.im == 0.0);
        }
    }

    #[test]
    fn zero_synthesizes_to_zero() {
        let p = plan(2, 6);
        let f = p
            .synthesize(&SpectralCoefficients::zeros(p.basis()))
            .unwrap();
        assert!(f.values().iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn round_trip_2d() {
        let p = plan(2, 10);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let c = SpectralCoefficients::random(p.basis(), 20, &mut rng);
        let back = p.analyze(&p.synthesize(&c).unwrap()).unwrap();
        assert!(back.max_abs_diff(&c) < 1e-10);
    }

    #[test]
    fn smaller_basis_through_larger_plan() {
        let p = plan(1, 30);
        let small = HermiteBasis::new(1, 5).unwrap();
        let c = SpectralCoefficients::unit(small, &[4]).unwrap();
        let f = p.synthesize(&c).unwrap();
        let back = p.analyze_into(&f, small).unwrap();
        assert!(back.max_abs_diff(&c) < 1e-12);
        let big = HermiteBasis::new(1, 40).unwrap();
        assert!(p.analyze_into(&f, big).is_err());
    }

    #[test]
    fn rejects_small_grid() {
        let b = HermiteBasis::new(1, 64).unwrap();
        let g = Grid::new(1, 6.0, 0.1).unwrap();
        assert!(matches!(
            TransformPlan::new(b, g),
            Err(Error::GridTooSmall { .. })
        ));
    }

    #[test]
    fn analyze_fn_requires_order() {
        let b = HermiteBasis::new(1, 10).unwrap();
        assert!(analyze_fn(|_| Complex64::new(1.0, 0.0), b, 20).is_err());
        let c = analyze_fn(
            |x| Complex64::new(crate::hermite::hermite_function(2, x[0]), 0.0),
            b,
            21,
        )
        .unwrap();
        let want = SpectralCoefficients::unit(b, &[2]).unwrap();
        assert!(c.max_abs_diff(&want) < 1e-13);
    }
}
