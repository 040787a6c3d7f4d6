//! Measured constants of the paraproduct and product estimates.
//!
//! Each function returns the left side of an estimate divided by its right
//! side, so a family of inputs yields an empirical lower bound for the
//! constant. Norms of pieces and products are taken in the product basis.

use serde::{Deserialize, Serialize};

use super::bony::{bony_decompose, BonyPieces};
use super::product::ProductEngine;
use crate::besov::{require_holder, BlockNorms, Exponent, LpEvaluator};
use crate::error::{Error, Result};
use crate::flags::{Flags, Ratio};
use crate::hermite::SpectralCoefficients;
use crate::spectral::DyadicPartition;

/// Shared machinery for bilinear measurements.
#[derive(Debug, Default)]
pub struct Bilinear {
    pub engine: ProductEngine,
    pub eval: LpEvaluator,
    pub n0: Option<i32>,
}

impl Bilinear {
    fn n0(&self) -> i32 {
        self.n0.unwrap_or(super::bony::DEFAULT_N0)
    }

    fn pieces(
        &self,
        f: &SpectralCoefficients,
        g: &SpectralCoefficients,
        partition: &DyadicPartition,
    ) -> Result<BonyPieces> {
        bony_decompose(f, g, partition, self.n0(), &self.engine)
    }

    fn besov(
        &self,
        c: &SpectralCoefficients,
        partition: &DyadicPartition,
        s: f64,
        p: Exponent,
        q: Exponent,
    ) -> Result<(f64, Flags)> {
        let b = BlockNorms::compute(c, partition, p, &self.eval)?;
        Ok((b.besov(s, q), b.flags()))
    }
}

/// Exponents of the low-high estimate `||f < g||_{B^s_{p,q}} <= C ||f||_{L^p1} ||g||_{B^s_{p2,q}}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LowHighParams {
    pub s: f64,
    pub p: Exponent,
    pub p1: Exponent,
    pub p2: Exponent,
    pub q: Exponent,
}

/// Exponents of `||f < g||_{B^{s+r}_{p,q}} <= C ||f||_{B^s_{p1,inf}} ||g||_{B^r_{p2,q}}`, `s < 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NegativeLowHighParams {
    pub s: f64,
    pub r: f64,
    pub p: Exponent,
    pub p1: Exponent,
    pub p2: Exponent,
    pub q: Exponent,
}

/// Exponents of the resonant estimate with `s1 + s2 > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResonantParams {
    pub s1: f64,
    pub s2: f64,
    pub p: Exponent,
    pub p1: Exponent,
    pub p2: Exponent,
    pub q: Exponent,
    pub q1: Exponent,
    pub q2: Exponent,
}

/// Exponents of the product estimate
/// `||fg||_{B^s_{p,q}} <= C (||f||_{B^s_{p1,q}} ||g||_{L^p2} + ||f||_{L^p3} ||g||_{B^s_{p4,q}})`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProductParams {
    pub s: f64,
    pub p: Exponent,
    pub p1: Exponent,
    pub p2: Exponent,
    pub p3: Exponent,
    pub p4: Exponent,
    pub q: Exponent,
}

/// Exponents of `||fg||_{B^s_{p,q}} <= C ||f||_{B^s_{p1,q}} ||g||_{B^r_{p2,q}}`, `s < 0 < r`, `s + r > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NegPosProductParams {
    pub s: f64,
    pub r: f64,
    pub p: Exponent,
    pub p1: Exponent,
    pub p2: Exponent,
    pub q: Exponent,
}

pub fn lowhigh_estimate_ratio(
    f: &SpectralCoefficients,
    g: &SpectralCoefficients,
    partition: &DyadicPartition,
    params: &LowHighParams,
    ctx: &Bilinear,
) -> Result<Ratio> {
    let LowHighParams { s, p, p1, p2, q } = *params;
    require_holder(p, p1, p2)?;
    let pieces = ctx.pieces(f, g, partition)?;
    let (num, nf) = ctx.besov(&pieces.low_high, partition, s, p, q)?;
    let (gb, gf) = ctx.besov(g, partition, s, p2, q)?;
    let den = ctx.eval.norm(f, p1)? * gb;
    Ok(Ratio::of(num, den).with(pieces.flags | nf | gf))
}

pub fn negative_s_lowhigh_ratio(
    f: &SpectralCoefficients,
    g: &SpectralCoefficients,
    partition: &DyadicPartition,
    params: &NegativeLowHighParams,
    ctx: &Bilinear,
) -> Result<Ratio> {
    let NegativeLowHighParams { s, r, p, p1, p2, q } = *params;
    if s >= 0.0 {
        return Err(Error::invalid(format!("this estimate needs s < 0, got {s}")));
    }
    require_holder(p, p1, p2)?;
    let pieces = ctx.pieces(f, g, partition)?;
    let (num, nf) = ctx.besov(&pieces.low_high, partition, s + r, p, q)?;
    let (fb, ff) = ctx.besov(f, partition, s, p1, Exponent::INF)?;
    let (gb, gf) = ctx.besov(g, partition, r, p2, q)?;
    Ok(Ratio::of(num, fb * gb).with(pieces.flags | nf | ff | gf))
}

pub fn resonant_estimate_ratio(
    f: &SpectralCoefficients,
    g: &SpectralCoefficients,
    partition: &DyadicPartition,
    params: &ResonantParams,
    ctx: &Bilinear,
) -> Result<Ratio> {
    let ResonantParams {
        s1,
        s2,
        p,
        p1,
        p2,
        q,
        q1,
        q2,
    } = *params;
    if s1 + s2 <= 0.0 {
        return Err(Error::invalid(format!(
            "the resonant estimate needs s1 + s2 > 0, got {}",
            s1 + s2
        )));
    }
    require_holder(p, p1, p2)?;
    require_holder(q, q1, q2)?;
    let pieces = ctx.pieces(f, g, partition)?;
    let (num, nf) = ctx.besov(&pieces.resonant, partition, s1 + s2, p, q)?;
    let (fb, ff) = ctx.besov(f, partition, s1, p1, q1)?;
    let (gb, gf) = ctx.besov(g, partition, s2, p2, q2)?;
    Ok(Ratio::of(num, fb * gb).with(pieces.flags | nf | ff | gf))
}

pub fn product_estimate_ratio(
    f: &SpectralCoefficients,
    g: &SpectralCoefficients,
    partition: &DyadicPartition,
    params: &ProductParams,
    ctx: &Bilinear,
) -> Result<Ratio> {
    let ProductParams {
        s,
        p,
        p1,
        p2,
        p3,
        p4,
        q,
    } = *params;
    if s <= 0.0 {
        return Err(Error::invalid(format!("the product estimate needs s > 0, got {s}")));
    }
    require_holder(p, p1, p2)?;
    require_holder(p, p3, p4)?;
    let prod = ctx.engine.product(f, g)?;
    let (num, nf) = ctx.besov(&prod.coeffs, partition, s, p, q)?;
    let (fb, ff) = ctx.besov(f, partition, s, p1, q)?;
    let (gb, gf) = ctx.besov(g, partition, s, p4, q)?;
    let den = fb * ctx.eval.norm(g, p2)? + ctx.eval.norm(f, p3)? * gb;
    Ok(Ratio::of(num, den).with(prod.flags | nf | ff | gf))
}

pub fn negative_positive_product_ratio(
    f: &SpectralCoefficients,
    g: &SpectralCoefficients,
    partition: &DyadicPartition,
    params: &NegPosProductParams,
    ctx: &Bilinear,
) -> Result<Ratio> {
    let NegPosProductParams { s, r, p, p1, p2, q } = *params;
    if !(s < 0.0 && r > 0.0 && s + r > 0.0) {
        return Err(Error::invalid(format!(
            "this estimate needs s < 0 < r and s + r > 0, got s = {s}, r = {r}"
        )));
    }
    require_holder(p, p1, p2)?;
    let prod = ctx.engine.product(f, g)?;
    let (num, nf) = ctx.besov(&prod.coeffs, partition, s, p, q)?;
    let (fb, ff) = ctx.besov(f, partition, s, p1, q)?;
    let (gb, gf) = ctx.besov(g, partition, r, p2, q)?;
    Ok(Ratio::of(num, fb * gb).with(prod.flags | nf | ff | gf))
}
