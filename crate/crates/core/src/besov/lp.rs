use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use super::exponent::Exponent;
use crate::error::{Error, Result};
use crate::hermite::{
    Grid, GridFunction, HermiteBasis, SpectralCoefficients, TransformPlan, DEFAULT_MARGIN,
    DEFAULT_SPACING,
};

/// `||f||_{L^p}` by the trapezoid rule, or the grid maximum for `p = inf`.
pub fn lp_norm(f: &GridFunction, p: Exponent) -> f64 {
    let values = f.values();
    match p {
        Exponent::Infinity => values.iter().map(|v| v.norm()).fold(0.0, f64::max),
        Exponent::Finite(p) => {
            let weights = f.grid().weights();
            let top = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
            if top == 0.0 {
                return 0.0;
            }
            let sum: f64 = values
                .iter()
                .zip(&weights)
                .map(|(v, w)| w * (v.norm() / top).powf(p))
                .sum();
            top * sum.powf(1.0 / p)
        }
    }
}

/// Evaluates L^p norms of Hermite expansions on uniform grids, caching one
/// transform plan per basis.
///
/// The grid half-width is `sqrt(2N + d) + margin`. The spacing starts at the
/// configured value and is halved until `h sqrt(2N + d) <= 2.25`, which keeps
/// the trapezoid rule spectrally accurate for every basis function. For
/// `p = 2` the norm is taken from the coefficients by Parseval.
#[derive(Debug)]
pub struct LpEvaluator {
    spacing: f64,
    margin: f64,
    plans: Mutex<HashMap<HermiteBasis, Arc<TransformPlan>>>,
}

impl Default for LpEvaluator {
    fn default() -> Self {
        Self::new(DEFAULT_SPACING, DEFAULT_MARGIN).expect("default grid parameters are valid")
    }
}

impl Clone for LpEvaluator {
    fn clone(&self) -> Self {
        Self::new(self.spacing, self.margin).expect("validated on construction")
    }
}

impl LpEvaluator {
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

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn margin(&self) -> f64 {
        self.margin
    }

    /// Grid used for `basis`.
    pub fn grid_for(&self, basis: &HermiteBasis) -> Result<Grid> {
        let top = ((2 * basis.max_degree() + basis.dim()) as f64).sqrt();
        let mut spacing = self.spacing;
        while spacing * top > 2.25 {
            spacing *= 0.5;
        }
        Grid::for_basis(basis, spacing, self.margin)
    }

    pub fn plan(&self, basis: HermiteBasis) -> Result<Arc<TransformPlan>> {
        let mut plans = self.plans.lock().expect("plan cache poisoned");
        if let Some(plan) = plans.get(&basis) {
            return Ok(plan.clone());
        }
        let plan = Arc::new(TransformPlan::new(basis, self.grid_for(&basis)?)?);
        plans.insert(basis, plan.clone());
        Ok(plan)
    }

    pub fn synthesize(&self, c: &SpectralCoefficients) -> Result<GridFunction> {
        self.plan(c.basis())?.synthesize(c)
    }

    pub fn norm(&self, c: &SpectralCoefficients, p: Exponent) -> Result<f64> {
        if p == Exponent::TWO {
            return Ok(c.norm());
        }
        if c.is_zero() {
            return Ok(0.0);
        }
        Ok(lp_norm(&self.synthesize(c)?, p))
    }

    /// Several norms of the same function from one synthesis.
    pub fn norms(&self, c: &SpectralCoefficients, ps: &[Exponent]) -> Result<Vec<f64>> {
        if c.is_zero() {
            return Ok(vec![0.0; ps.len()]);
        }
        let grid_needed = ps.iter().any(|&p| p != Exponent::TWO);
        let f = if grid_needed {
            Some(self.synthesize(c)?)
        } else {
            None
        };
        Ok(ps
            .iter()
            .map(|&p| match (&f, p) {
                (_, Exponent::Finite(v)) if v == 2.0 => c.norm(),
                (Some(f), p) => lp_norm(f, p),
                (None, _) => unreachable!("grid synthesized whenever p != 2"),
            })
            .collect())
    }
}
