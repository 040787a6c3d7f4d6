use serde::{Deserialize, Serialize};

use super::heat::heat_apply;
use crate::besov::{BlockNorms, Exponent, LpEvaluator};
use crate::error::{Error, Result};
use crate::flags::{Flags, Ratio};
use crate::hermite::SpectralCoefficients;
use crate::spectral::DyadicPartition;

/// Fewest nonzero blocks for an input to count as broadband in a rate fit.
pub const MIN_BROADBAND_BLOCKS: usize = 3;

/// Source space `B^{s1}_{p1,q1}` and target space `B^{s2}_{p2,q2}` of the smoothing estimate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmoothingParams {
    pub s1: f64,
    pub s2: f64,
    pub p1: Exponent,
    pub p2: Exponent,
    pub q1: Exponent,
    pub q2: Exponent,
}

impl SmoothingParams {
    pub fn validate(&self, dim: usize) -> Result<()> {
        if self.s2 < self.s1 {
            return Err(Error::invalid("smoothing needs s2 >= s1"));
        }
        if self.p1.value() > self.p2.value() {
            return Err(Error::invalid("smoothing needs p1 <= p2"));
        }
        if self.gain(dim) <= 0.0 {
            return Err(Error::invalid(
                "smoothing needs d(1/p1 - 1/p2) + s2 - s1 > 0",
            ));
        }
        Ok(())
    }

    /// `d(1/p1 - 1/p2) + s2 - s1`.
    pub fn gain(&self, dim: usize) -> f64 {
        dim as f64 * (self.p1.recip() - self.p2.recip()) + self.s2 - self.s1
    }

    /// Predicted log-log slope `-(d/2)(1/p1 - 1/p2) - (s2 - s1)/2`.
    pub fn predicted_slope(&self, dim: usize) -> f64 {
        -0.5 * self.gain(dim)
    }
}

/// `||e^{-tH} f||_{B^{s2}_{p2,q2}} t^{gain/2} / ||f||_{B^{s1}_{p1,q1}}`.
pub fn smoothing_ratio(
    f: &SpectralCoefficients,
    t: f64,
    partition: &DyadicPartition,
    params: &SmoothingParams,
    eval: &LpEvaluator,
) -> Result<Ratio> {
    params.validate(partition.dim())?;
    if !(t > 0.0) {
        return Err(Error::invalid(format!("smoothing ratio needs t > 0, got {t}")));
    }
    let src = BlockNorms::compute(f, partition, params.p1, eval)?;
    let flowed = heat_apply(t, f)?;
    let dst = BlockNorms::compute(&flowed, partition, params.p2, eval)?;
    let num = dst.besov(params.s2, params.q2) * t.powf(0.5 * params.gain(partition.dim()));
    Ok(Ratio::of(num, src.besov(params.s1, params.q1)).with(src.flags()))
}

/// `||e^{-tH} f||_{B^s_{p,q}} / ||f||_{B^s_{p,q}}`.
pub fn heat_bound_ratio(
    f: &SpectralCoefficients,
    t: f64,
    partition: &DyadicPartition,
    s: f64,
    p: Exponent,
    q: Exponent,
    eval: &LpEvaluator,
) -> Result<Ratio> {
    let src = BlockNorms::compute(f, partition, p, eval)?;
    let dst = BlockNorms::compute(&heat_apply(t, f)?, partition, p, eval)?;
    Ok(Ratio::of(dst.besov(s, q), src.besov(s, q)).with(src.flags()))
}

/// Least-squares power-law fit of the smoothed norm against time.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    pub predicted: f64,
    /// `|slope - predicted| / |predicted|`.
    pub relative_error: f64,
    pub times: Vec<f64>,
    pub norms: Vec<f64>,
    pub flags: Flags,
}

/// Fits `log ||e^{-tH} f||_{B^{s2}_{p2,q2}}` against `log t` over `times`.
pub fn smoothing_rate_fit(
    f: &SpectralCoefficients,
    partition: &DyadicPartition,
    params: &SmoothingParams,
    times: &[f64],
    eval: &LpEvaluator,
) -> Result<RateFit> {
    params.validate(partition.dim())?;
    if times.len() < 4 {
        return Err(Error::invalid(format!(
            "a rate fit needs at least 4 times, got {}",
            times.len()
        )));
    }
    if times.iter().any(|t| !(*t > 0.0)) {
        return Err(Error::invalid("rate-fit times must be positive"));
    }
    let src = BlockNorms::compute(f, partition, params.p1, eval)?;
    let active = src.iter().filter(|(_, v)| *v > 0.0).count();
    let mut flags = src.flags() | Flags::when(active < MIN_BROADBAND_BLOCKS, Flags::NARROWBAND);
    let norms = times
        .iter()
        .map(|&t| {
            let b = BlockNorms::compute(&heat_apply(t, f)?, partition, params.p2, eval)?;
            Ok(b.besov(params.s2, params.q2))
        })
        .collect::<Result<Vec<_>>>()?;
    if norms.iter().any(|v| *v <= 0.0) {
        flags |= Flags::ZERO_DENOMINATOR;
        return Ok(RateFit {
            slope: 0.0,
            intercept: 0.0,
            predicted: params.predicted_slope(partition.dim()),
            relative_error: f64::INFINITY,
            times: times.to_vec(),
            norms,
            flags,
        });
    }
    let xs: Vec<f64> = times.iter().map(|t| t.ln()).collect();
    let ys: Vec<f64> = norms.iter().map(|v| v.ln()).collect();
    let (slope, intercept) = least_squares(&xs, &ys);
    let predicted = params.predicted_slope(partition.dim());
    Ok(RateFit {
        slope,
        intercept,
        predicted,
        relative_error: (slope - predicted).abs() / predicted.abs(),
        times: times.to_vec(),
        norms,
        flags,
    })
}

/// Slope and intercept of the least-squares line through `(xs, ys)`.
pub fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// `n` log-spaced points on `[lo, hi]`.
pub fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}
