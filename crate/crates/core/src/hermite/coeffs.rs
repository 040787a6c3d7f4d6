use std::ops::{Add, AddAssign, Mul, Sub};

use num_complex::Complex64;
use rand::Rng;

use super::basis::HermiteBasis;
use crate::error::{Error, Result};

/// Finite Hermite expansion `f = sum_n c_n h_n`.
///
/// `lossy` records that an operation which raises degree dropped mass at the
/// top of the basis.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralCoefficients {
    basis: HermiteBasis,
    coeffs: Vec<Complex64>,
    lossy: bool,
}

impl SpectralCoefficients {
    pub fn zeros(basis: HermiteBasis) -> Self {
        Self {
            basis,
            coeffs: vec![Complex64::new(0.0, 0.0); basis.len()],
            lossy: false,
        }
    }

    /// The basis function `h_n` itself.
    pub fn unit(basis: HermiteBasis, n: &[usize]) -> Result<Self> {
        let mut c = Self::zeros(basis);
        let k = basis.flat_index(n)?;
        c.coeffs[k] = Complex64::new(1.0, 0.0);
        Ok(c)
    }

    pub fn from_vec(basis: HermiteBasis, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != basis.len() {
            return Err(Error::BasisMismatch(format!(
                "expected {} coefficients, got {}",
                basis.len(),
                coeffs.len()
            )));
        }
        Ok(Self {
            basis,
            coeffs,
            lossy: false,
        })
    }

    pub fn from_real(basis: HermiteBasis, coeffs: &[f64]) -> Result<Self> {
        Self::from_vec(
            basis,
            coeffs.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        )
    }

    /// Builds coefficients from a function of the multi-index.
    pub fn from_fn(basis: HermiteBasis, mut f: impl FnMut([usize; 2]) -> Complex64) -> Self {
        let coeffs = (0..basis.len()).map(|k| f(basis.multi_index(k))).collect();
        Self {
            basis,
            coeffs,
            lossy: false,
        }
    }

    /// Uniform random coefficients in the unit square of the complex plane,
    /// restricted to total degree `<= band`.
    pub fn random<R: Rng>(basis: HermiteBasis, band: usize, rng: &mut R) -> Self {
        Self::from_fn(basis, |n| {
            if n[0] + n[1] <= band {
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    pub fn basis(&self) -> HermiteBasis {
        self.basis
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn get(&self, n: &[usize]) -> Result<Complex64> {
        Ok(self.coeffs[self.basis.flat_index(n)?])
    }

    pub fn is_lossy(&self) -> bool {
        self.lossy
    }

    pub fn with_lossy(mut self, lossy: bool) -> Self {
        self.lossy = self.lossy || lossy;
        self
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// L² norm by Parseval.
    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `<f, g> = int f conj(g)`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.assert_same_basis(other);
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a * b.conj())
            .sum()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.re == 0.0 && c.im == 0.0)
    }

    /// Multiplies coefficient `k` by `factor(k)`.
    pub fn map_diagonal(&self, mut factor: impl FnMut(usize) -> f64) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c * factor(k))
            .collect();
        Self {
            basis: self.basis,
            coeffs,
            lossy: self.lossy,
        }
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            basis: self.basis,
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
            lossy: self.lossy,
        }
    }

    /// Re-expresses the coefficients in a basis of the same dimension and a
    /// different maximal degree. Dropping nonzero coefficients marks the
    /// result lossy.
    pub fn resize(&self, basis: HermiteBasis) -> Result<Self> {
        if basis.dim() != self.basis.dim() {
            return Err(Error::BasisMismatch(format!(
                "cannot move a {}-d expansion into a {}-d basis",
                self.basis.dim(),
                basis.dim()
            )));
        }
        let mut out = Self::zeros(basis);
        out.lossy = self.lossy;
        let keep = basis.max_degree();
        for (k, c) in self.coeffs.iter().enumerate() {
            let [a, b] = self.basis.multi_index(k);
            if a <= keep && b <= keep {
                let target = match basis.dim() {
                    1 => a,
                    _ => a * basis.axis_len() + b,
                };
                out.coeffs[target] = *c;
            } else if c.norm_sqr() > 0.0 {
                out.lossy = true;
            }
        }
        Ok(out)
    }

    /// Largest per-axis degree that carries a nonzero coefficient.
    pub fn effective_degree(&self) -> usize {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.re != 0.0 || c.im != 0.0)
            .map(|(k, _)| {
                let [a, b] = self.basis.multi_index(k);
                a.max(b)
            })
            .max()
            .unwrap_or(0)
    }

    /// Relative L² mass carried by total degrees `> max_total - shells`.
    pub fn relative_tail(&self, shells: usize) -> f64 {
        let total = self.norm_sqr();
        if total == 0.0 {
            return 0.0;
        }
        let top = self.basis.max_degree();
        let cut = top.saturating_sub(shells);
        let tail: f64 = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(k, _)| {
                let [a, b] = self.basis.multi_index(*k);
                a.max(b) > cut
            })
            .map(|(_, c)| c.norm_sqr())
            .sum();
        (tail / total).sqrt()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.assert_same_basis(other);
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    fn assert_same_basis(&self, other: &Self) {
        assert_eq!(
            self.basis, other.basis,
            "spectral coefficients live in different bases"
        );
    }
}

impl Add for &SpectralCoefficients {
    type Output = SpectralCoefficients;

    fn add(self, rhs: Self) -> SpectralCoefficients {
        self.assert_same_basis(rhs);
        SpectralCoefficients {
            basis: self.basis,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
            lossy: self.lossy || rhs.lossy,
        }
    }
}

impl Sub for &SpectralCoefficients {
    type Output = SpectralCoefficients;

    fn sub(self, rhs: Self) -> SpectralCoefficients {
        self.assert_same_basis(rhs);
        SpectralCoefficients {
            basis: self.basis,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
            lossy: self.lossy || rhs.lossy,
        }
    }
}

impl AddAssign<&SpectralCoefficients> for SpectralCoefficients {
    fn add_assign(&mut self, rhs: &SpectralCoefficients) {
        self.assert_same_basis(rhs);
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
        self.lossy |= rhs.lossy;
    }
}

impl Mul<f64> for &SpectralCoefficients {
    type Output = SpectralCoefficients;

    fn mul(self, rhs: f64) -> SpectralCoefficients {
        self.scale(Complex64::new(rhs, 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis() -> HermiteBasis {
        HermiteBasis::new(1, 6).unwrap()
    }

    #[test]
    fn unit_and_norm() {
        let c = SpectralCoefficients::unit(basis(), &[3]).unwrap();
        assert_eq!(c.norm(), 1.0);
        assert_eq!(c.effective_degree(), 3);
        assert!(SpectralCoefficients::unit(basis(), &[7]).is_err());
    }

    #[test]
    fn inner_is_conjugate_linear_in_second_slot() {
        let b = basis();
        let f = SpectralCoefficients::from_vec(
            b,
            (0..7).map(|k| Complex64::new(k as f64, 1.0)).collect(),
        )
        .unwrap();
        let g = f.scale(Complex64::new(0.0, 1.0));
        let lhs = f.inner(&g);
        let rhs = Complex64::new(0.0, -1.0) * f.inner(&f);
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn resize_flags_truncation() {
        let c = SpectralCoefficients::unit(basis(), &[5]).unwrap();
        let up = c.resize(basis().with_max_degree(10)).unwrap();
        assert!(!up.is_lossy());
        assert_eq!(up.get(&[5]).unwrap(), Complex64::new(1.0, 0.0));
        let down = c.resize(basis().with_max_degree(4)).unwrap();
        assert!(down.is_lossy());
        assert!(down.is_zero());
    }

    #[test]
    fn resize_2d_keeps_positions() {
        let b = HermiteBasis::new(2, 3).unwrap();
        let c = SpectralCoefficients::unit(b, &[2, 1]).unwrap();
        let up = c.resize(b.with_max_degree(5)).unwrap();
        assert_eq!(up.get(&[2, 1]).unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(up.norm(), 1.0);
    }
}
