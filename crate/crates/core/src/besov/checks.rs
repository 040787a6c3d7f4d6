//! Measured ratios for the structural properties of `B^s_{p,q}(H)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::exponent::Exponent;
use super::lp::LpEvaluator;
use super::norm::BlockNorms;
use crate::error::{Error, Result};
use crate::flags::Ratio;
use crate::hermite::SpectralCoefficients;
use crate::spectral::{apply_h_power, lp_block, widened_block, DyadicPartition};

/// `sum_j <f_j, Phi_j g>`; equals `<f, g>` on the resolved span.
pub fn duality_pairing(
    f: &SpectralCoefficients,
    g: &SpectralCoefficients,
    partition: &DyadicPartition,
) -> Result<Complex64> {
    partition.check_basis(&f.basis())?;
    if f.basis() != g.basis() {
        return Err(Error::BasisMismatch(
            "pairing needs both functions in one basis".into(),
        ));
    }
    Ok(partition
        .blocks_for(&f.basis())
        .map(|j| lp_block(partition, j, f).inner(&widened_block(partition, j, g)))
        .sum())
}

/// `||f||_{B^s_{p,q}} / ||f||_{B^{s + d(1/r - 1/p)}_{r,q}}` for `r <= p`.
pub fn embedding_ratio(
    f: &SpectralCoefficients,
    partition: &DyadicPartition,
    s: f64,
    r: Exponent,
    p: Exponent,
    q: Exponent,
    eval: &LpEvaluator,
) -> Result<Ratio> {
    if r.value() > p.value() {
        return Err(Error::invalid(format!("embedding needs r <= p, got r = {r}, p = {p}")));
    }
    let d = partition.dim() as f64;
    let top = BlockNorms::compute(f, partition, p, eval)?;
    let bottom = BlockNorms::compute(f, partition, r, eval)?;
    let shift = d * (r.recip() - p.recip());
    Ok(Ratio::of(top.besov(s, q), bottom.besov(s + shift, q)).with(top.flags()))
}

/// `(||f||_{B^0_{p,inf}} / ||f||_{L^p}, ||f||_{L^p} / ||f||_{B^0_{p,1}})`.
pub fn sandwich_check(
    f: &SpectralCoefficients,
    partition: &DyadicPartition,
    p: Exponent,
    eval: &LpEvaluator,
) -> Result<(Ratio, Ratio)> {
    let blocks = BlockNorms::compute(f, partition, p, eval)?;
    let lp = eval.norm(f, p)?;
    Ok((
        Ratio::of(blocks.besov(0.0, Exponent::INF), lp).with(blocks.flags()),
        Ratio::of(lp, blocks.besov(0.0, Exponent::ONE)).with(blocks.flags()),
    ))
}

/// Exponents of the interpolation inequality
/// `||f||_{B^s_{p,1}} <= ||f||^theta_{B^0_{r,inf}} ||f||^{1-theta}_{B^{s0}_{r0,inf}}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InterpolationParams {
    pub s: f64,
    pub s0: f64,
    pub p: Exponent,
    pub r: Exponent,
    pub r0: Exponent,
    pub theta: f64,
}

impl InterpolationParams {
    /// Checks the scaling identity and the admissibility conditions in dimension `d`.
    pub fn validate(&self, dim: usize) -> Result<()> {
        let d = dim as f64;
        let bad = |msg: String| Err(Error::invalid(format!("interpolation tuple rejected: {msg}")));
        if !(self.s > 0.0 && self.s0 > 0.0) {
            return bad("s and s0 must be positive".into());
        }
        if !(self.theta > 0.0 && self.theta < 1.0) {
            return bad(format!("theta = {} outside (0, 1)", self.theta));
        }
        let left = self.s - d * self.p.recip();
        let right_r = -d * self.r.recip();
        let right_r0 = self.s0 - d * self.r0.recip();
        if (left - (self.theta * right_r + (1.0 - self.theta) * right_r0)).abs() > 1e-12 {
            return bad("scaling identity s - d/p = theta(-d/r) + (1-theta)(s0 - d/r0) fails".into());
        }
        if (right_r - right_r0).abs() <= 1e-12 {
            return bad("-d/r must differ from s0 - d/r0".into());
        }
        let (lo, hi) = {
            let (a, b) = (self.r.value(), self.r0.value());
            (a.min(b), a.max(b))
        };
        let p = self.p.value();
        let cap = (1.0 - self.theta) * self.s0;
        if hi <= p {
            if self.s > cap + 1e-12 {
                return bad(format!("need s <= (1-theta) s0 = {cap}"));
            }
        } else if lo <= p {
            if self.s >= cap - 1e-12 {
                return bad(format!("need s < (1-theta) s0 = {cap}"));
            }
        } else {
            return bad("p must be at least min(r, r0)".into());
        }
        Ok(())
    }
}

/// `||f||_{B^s_{p,1}} / (||f||^theta_{B^0_{r,inf}} ||f||^{1-theta}_{B^{s0}_{r0,inf}})`.
pub fn interpolation_check(
    f: &SpectralCoefficients,
    partition: &DyadicPartition,
    params: &InterpolationParams,
    eval: &LpEvaluator,
) -> Result<Ratio> {
    params.validate(partition.dim())?;
    let top = BlockNorms::compute(f, partition, params.p, eval)?;
    let low = if params.r == params.p {
        top.clone()
    } else {
        BlockNorms::compute(f, partition, params.r, eval)?
    };
    let high = if params.r0 == params.p {
        top.clone()
    } else {
        BlockNorms::compute(f, partition, params.r0, eval)?
    };
    let den = low.besov(0.0, Exponent::INF).powf(params.theta)
        * high.besov(params.s0, Exponent::INF).powf(1.0 - params.theta);
    Ok(Ratio::of(top.besov(params.s, Exponent::ONE), den).with(top.flags()))
}

/// `||H^{alpha/2} f||_{B^s_{p,q}} / ||f||_{B^{s+alpha}_{p,q}}`.
pub fn lifting_ratio(
    f: &SpectralCoefficients,
    partition: &DyadicPartition,
    alpha: f64,
    s: f64,
    p: Exponent,
    q: Exponent,
    eval: &LpEvaluator,
) -> Result<Ratio> {
    let lifted = apply_h_power(alpha, f);
    let top = BlockNorms::compute(&lifted, partition, p, eval)?;
    let bottom = BlockNorms::compute(f, partition, p, eval)?;
    Ok(Ratio::of(top.besov(s, q), bottom.besov(s + alpha, q)).with(bottom.flags()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flags::Flags;
    use crate::hermite::HermiteBasis;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn setup(n: usize) -> (HermiteBasis, DyadicPartition, LpEvaluator) {
        let b = HermiteBasis::new(1, n).unwrap();
        (b, DyadicPartition::for_basis(&b), LpEvaluator::default())
    }

    #[test]
    fn pairing() {
        let (b, p, _) = setup(48);
        let h0 = SpectralCoefficients::unit(b, &[0]).unwrap();
        let h1 = SpectralCoefficients::unit(b, &[1]).unwrap();
        assert!((duality_pairing(&h0, &h0, &p).unwrap() - 1.0).norm() < 1e-15);
        assert_eq!(duality_pairing(&h0, &h1, &p).unwrap().norm(), 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f = SpectralCoefficients::random(b, 48, &mut rng);
        let g = SpectralCoefficients::random(b, 48, &mut rng);
        assert!((duality_pairing(&f, &g, &p).unwrap() - f.inner(&g)).norm() < 1e-10);
    }

    #[test]
    fn embedding_of_ground_state() {
        let (b, p, ev) = setup(16);
        let h0 = SpectralCoefficients::unit(b, &[0]).unwrap();
        let r = embedding_ratio(&h0, &p, 0.0, Exponent::ONE, Exponent::TWO, Exponent::TWO, &ev)
            .unwrap();
        let want = 1.0 / (PI.powf(-0.25) * (2.0 * PI).sqrt());
        assert!((r.value - want).abs() < 1e-10);
        assert!((r.value - 0.531_12).abs() < 1e-5);
        let zero = SpectralCoefficients::zeros(b);
        let z = embedding_ratio(&zero, &p, 0.0, Exponent::ONE, Exponent::TWO, Exponent::TWO, &ev)
            .unwrap();
        assert_eq!(z.value, 0.0);
        assert!(z.flags.contains(Flags::ZERO_DENOMINATOR));
        assert!(embedding_ratio(&h0, &p, 0.0, Exponent::INF, Exponent::TWO, Exponent::TWO, &ev)
            .is_err());
    }

    #[test]
    fn sandwich_small_cases() {
        let (b, p, ev) = setup(16);
        let h0 = SpectralCoefficients::unit(b, &[0]).unwrap();
        let (a, c) = sandwich_check(&h0, &p, Exponent::Finite(3.0), &ev).unwrap();
        assert!((a.value - 1.0).abs() < 1e-12 && (c.value - 1.0).abs() < 1e-12);
        let f = &h0 + &SpectralCoefficients::unit(b, &[1]).unwrap();
        for pe in [Exponent::ONE, Exponent::TWO, Exponent::INF] {
            let (a, c) = sandwich_check(&f, &p, pe, &ev).unwrap();
            assert!(a.value > 0.0 && a.value <= 2.0);
            assert!(c.value > 0.0 && c.value <= 2.0);
        }
    }

    #[test]
    fn interpolation_validation() {
        let ok = InterpolationParams {
            s: 0.5,
            s0: 1.0,
            p: Exponent::TWO,
            r: Exponent::TWO,
            r0: Exponent::TWO,
            theta: 0.5,
        };
        ok.validate(1).unwrap();
        let (b, p, ev) = setup(16);
        let h0 = SpectralCoefficients::unit(b, &[0]).unwrap();
        let v = interpolation_check(&h0, &p, &ok, &ev).unwrap();
        assert!(v.value.is_finite() && v.value > 0.0);
        let wrong_scaling = InterpolationParams { s: 0.4, ..ok };
        assert!(wrong_scaling.validate(1).is_err());
        let degenerate = InterpolationParams {
            s: 0.0,
            s0: 0.0,
            ..ok
        };
        assert!(degenerate.validate(1).is_err());
    }

    #[test]
    fn lifting_bounds() {
        let (b, p, ev) = setup(64);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let f = SpectralCoefficients::random(b, 60, &mut rng);
        for alpha in [-2.0, -1.0, 1.0, 2.0] {
            let r = lifting_ratio(&f, &p, alpha, 0.5, Exponent::TWO, Exponent::TWO, &ev).unwrap();
            assert!(r.value <= 4.0 && r.value >= 0.25, "{alpha}: {}", r.value);
        }
    }
}
