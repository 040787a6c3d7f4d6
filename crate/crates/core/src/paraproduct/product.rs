use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::flags::Flags;
use crate::hermite::{
    Grid, GridFunction, HermiteBasis, SpectralCoefficients, TransformPlan, DEFAULT_MARGIN,
    DEFAULT_SPACING,
};

/// Relative tail energy above which a projected product is flagged aliased.
pub const ALIASING_TOL: f64 = 1e-8;

/// Pointwise products of Hermite expansions.
///
/// Factors of degree `N` are synthesized on a grid, multiplied, and
/// projected with the trapezoid rule onto degree `2N`. The spacing is chosen
/// so that the rule is exact for `f g h_n` up to roundoff:
/// `2 pi / h >= 2 sqrt(2N + d) + sqrt(4N + d) + 16`. The tail check looks at
/// the top quarter of the output degrees.
#[derive(Debug)]
pub struct ProductEngine {
    spacing: f64,
    margin: f64,
    plans: Mutex<HashMap<HermiteBasis, Arc<TransformPlan>>>,
}

impl Default for ProductEngine {
    fn default() -> Self {
        Self::new(DEFAULT_SPACING, DEFAULT_MARGIN).expect("default grid parameters are valid")
    }
}

/// A projected product with its diagnostics.
#[derive(Clone, Debug)]
pub struct Product {
    pub coeffs: SpectralCoefficients,
    /// Relative energy in the top quarter of output degrees.
    pub tail: f64,
    pub flags: Flags,
}

impl ProductEngine {
    pub fn new(spacing: f64, margin: f64) -> Result<Self> {
        if !(spacing > 0.0) || !(margin >= 4.0) {
            return Err(Error::invalid(format!(
                "grid spacing must be positive and margin at least 4 (got {spacing}, {margin})"
            )));
        }
        Ok(Self {
            spacing,
            margin,
            plans: Mutex::new(HashMap::new()),
        })
    }

    /// Output basis for factors in `basis`: degree `2N`.
    pub fn product_basis(basis: &HermiteBasis) -> HermiteBasis {
        basis.with_max_degree(2 * basis.max_degree())
    }

    /// Frequency the grid must resolve for factors in `basis`.
    pub fn required_frequency(basis: &HermiteBasis) -> f64 {
        let d = basis.dim();
        let n = basis.max_degree();
        2.0 * ((2 * n + d) as f64).sqrt() + ((4 * n + d) as f64).sqrt() + 16.0
    }

    pub fn grid_for(&self, basis: &HermiteBasis) -> Result<Grid> {
        let out = Self::product_basis(basis);
        let need = Self::required_frequency(basis);
        let mut spacing = self.spacing;
        while 2.0 * std::f64::consts::PI / spacing < need {
            spacing *= 0.5;
        }
        Grid::for_basis(&out, spacing, self.margin)
    }

    /// Plan from the product basis to the product grid of factors in `basis`.
    pub fn plan(&self, basis: &HermiteBasis) -> Result<Arc<TransformPlan>> {
        let mut plans = self.plans.lock().expect("plan cache poisoned");
        if let Some(p) = plans.get(basis) {
            return Ok(p.clone());
        }
        let plan = Arc::new(TransformPlan::new(
            Self::product_basis(basis),
            self.grid_for(basis)?,
        )?);
        plans.insert(*basis, plan.clone());
        Ok(plan)
    }

    /// Samples of `f` on the product grid for its basis.
    pub fn synthesize(&self, f: &SpectralCoefficients) -> Result<GridFunction> {
        self.plan(&f.basis())?.synthesize(f)
    }

    /// Projects grid samples (on the product grid of `basis`) onto degree `2N`.
    pub fn project(&self, values: &GridFunction, basis: &HermiteBasis) -> Result<Product> {
        let coeffs = self.plan(basis)?.analyze(values)?;
        let top = coeffs.basis().max_degree();
        let tail = coeffs.relative_tail(top / 4).powi(2);
        Ok(Product {
            flags: Flags::when(tail > ALIASING_TOL, Flags::ALIASED),
            coeffs,
            tail,
        })
    }

    /// `f g` projected onto degree `2N`.
    pub fn product(&self, f: &SpectralCoefficients, g: &SpectralCoefficients) -> Result<Product> {
        if f.basis() != g.basis() {
            return Err(Error::BasisMismatch(format!(
                "product of {:?} and {:?}",
                f.basis(),
                g.basis()
            )));
        }
        let basis = f.basis();
        let values = self.synthesize(f)?.multiply(&self.synthesize(g)?)?;
        let mut out = self.project(&values, &basis)?;
        if f.is_lossy() || g.is_lossy() {
            out.flags |= Flags::LOSSY;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermite::{analyze_fn, hermite_function};
    use num_complex::Complex64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn square_of_ground_state() {
        let b = HermiteBasis::new(1, 12).unwrap();
        let h0 = SpectralCoefficients::unit(b, &[0]).unwrap();
        let eng = ProductEngine::default();
        let p = eng.product(&h0, &h0).unwrap();
        assert!(p.flags.is_empty());
        let want = [
            (0, 0.613_291_438_903_102_2),
            (2, -0.144_554_178_430_679_6),
            (4, 0.041_729_196_914_719_03),
            (6, -0.012_697_790_253_759_22),
            (10, -0.001_252_019_003_505_071),
        ];
        for (n, v) in want {
            assert!((p.coeffs.coeffs()[n].re - v).abs() < 1e-12, "n = {n}");
        }
        assert!(p.coeffs.coeffs()[1].norm() < 1e-15);
    }

    #[test]
    fn zero_factor() {
        let b = HermiteBasis::new(1, 10).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = SpectralCoefficients::random(b, 10, &mut rng);
        let p = ProductEngine::default()
            .product(&f, &SpectralCoefficients::zeros(b))
            .unwrap();
        assert!(p.coeffs.is_zero());
    }

    #[test]
    fn projection_pairing_is_associative() {
        let b = HermiteBasis::new(1, 24).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = SpectralCoefficients::random(b, 12, &mut rng);
        let g = SpectralCoefficients::random(b, 12, &mut rng);
        let h = SpectralCoefficients::random(b, 12, &mut rng);
        let eng = ProductEngine::default();
        let wide = ProductEngine::product_basis(&b);
        let fg = eng.product(&f, &g).unwrap().coeffs;
        let gh = eng.product(&conj(&g), &h).unwrap().coeffs;
        // <fg, h> = int f g conj(h) = <f, conj(g) h>
        let lhs = fg.inner(&h.resize(wide).unwrap());
        let rhs = f.resize(wide).unwrap().inner(&gh);
        assert!((lhs - rhs).norm() < 1e-8 * (1.0 + lhs.norm()));
    }

    fn conj(c: &SpectralCoefficients) -> SpectralCoefficients {
        SpectralCoefficients::from_vec(c.basis(), c.coeffs().iter().map(|v| v.conj()).collect())
            .unwrap()
    }

    #[test]
    fn matches_quadrature_oracle() {
        let b = HermiteBasis::new(1, 8).unwrap();
        let f = SpectralCoefficients::unit(b, &[3]).unwrap();
        let g = SpectralCoefficients::unit(b, &[5]).unwrap();
        let p = ProductEngine::default().product(&f, &g).unwrap();
        let oracle = analyze_fn(
            |x| Complex64::new(hermite_function(3, x[0]) * hermite_function(5, x[0]), 0.0),
            ProductEngine::product_basis(&b),
            60,
        )
        .unwrap();
        assert!(p.coeffs.max_abs_diff(&oracle) < 1e-12);
    }

    #[test]
    fn wide_input_is_flagged() {
        let b = HermiteBasis::new(1, 32).unwrap();
        let f = SpectralCoefficients::unit(b, &[32]).unwrap();
        let p = ProductEngine::default().product(&f, &f).unwrap();
        assert!(p.flags.contains(Flags::ALIASED), "tail {}", p.tail);
    }
}
