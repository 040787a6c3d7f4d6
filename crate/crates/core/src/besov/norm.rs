use serde::{Deserialize, Serialize};

use super::exponent::Exponent;
use super::lp::LpEvaluator;
use crate::error::{Error, Result};
use crate::flags::Flags;
use crate::hermite::SpectralCoefficients;
use crate::spectral::{lp_block, pow2, DyadicPartition};

/// Relative top-degree mass above which an expansion counts as unresolved.
pub const TAIL_TOL: f64 = 1e-12;

/// Parameters `(s, p, q)` of `B^s_{p,q}(H)` with an optional block window.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BesovParams {
    pub s: f64,
    pub p: Exponent,
    pub q: Exponent,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j_range: Option<(i32, i32)>,
}

impl BesovParams {
    pub fn new(s: f64, p: Exponent, q: Exponent) -> Self {
        Self {
            s,
            p,
            q,
            j_range: None,
        }
    }

    pub fn with_range(mut self, lo: i32, hi: i32) -> Self {
        self.j_range = Some((lo, hi));
        self
    }
}

/// Per-block `L^p` norms `||f_j||_{L^p}`; every Besov norm with this `p` follows.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockNorms {
    p: Exponent,
    j0: i32,
    norms: Vec<f64>,
    flags: Flags,
}

impl BlockNorms {
    pub fn compute(
        c: &SpectralCoefficients,
        partition: &DyadicPartition,
        p: Exponent,
        eval: &LpEvaluator,
    ) -> Result<Self> {
        partition.check_basis(&c.basis())?;
        let range = partition.blocks_for(&c.basis());
        let j0 = *range.start();
        let norms = range
            .map(|j| eval.norm(&lp_block(partition, j, c), p))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            p,
            j0,
            norms,
            flags: resolution_flags(c),
        })
    }

    pub fn p(&self) -> Exponent {
        self.p
    }

    pub fn flags(&self) -> Flags {
        self.flags
    }

    /// `(j, ||f_j||_{L^p})` pairs in ascending `j`.
    pub fn iter(&self) -> impl Iterator<Item = (i32, f64)> + '_ {
        self.norms
            .iter()
            .enumerate()
            .map(move |(k, &v)| (self.j0 + k as i32, v))
    }

    pub fn profile(&self, s: f64, q: Exponent, window: Option<(i32, i32)>) -> BlockProfile {
        let (j, weighted): (Vec<i32>, Vec<f64>) = self
            .iter()
            .filter(|(j, _)| window.is_none_or(|(lo, hi)| *j >= lo && *j <= hi))
            .map(|(j, v)| (j, pow2(j).powf(s) * v))
            .unzip();
        let value = q.sequence_norm(&weighted);
        BlockProfile {
            s,
            p: self.p,
            q,
            j,
            weighted,
            value,
        }
    }

    /// `||f||_{B^s_{p,q}}`.
    pub fn besov(&self, s: f64, q: Exponent) -> f64 {
        self.profile(s, q, None).value
    }
}

pub(crate) fn resolution_flags(c: &SpectralCoefficients) -> Flags {
    Flags::when(c.relative_tail(1) > TAIL_TOL, Flags::UNRESOLVED)
        | Flags::when(c.is_lossy(), Flags::LOSSY)
}

/// Weighted block values `a_j = 2^{sj} ||f_j||_{L^p}` and their `l^q` norm.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockProfile {
    pub s: f64,
    pub p: Exponent,
    pub q: Exponent,
    pub j: Vec<i32>,
    pub weighted: Vec<f64>,
    pub value: f64,
}

impl BlockProfile {
    /// Same blocks aggregated with another summability exponent.
    pub fn with_q(&self, q: Exponent) -> f64 {
        q.sequence_norm(&self.weighted)
    }
}

/// `||f||_{B^s_{p,q}(H)}` with its block profile and resolution flags.
pub fn besov_norm(
    c: &SpectralCoefficients,
    partition: &DyadicPartition,
    params: &BesovParams,
    eval: &LpEvaluator,
) -> Result<(f64, BlockProfile, Flags)> {
    if let Some((lo, hi)) = params.j_range {
        if lo > hi {
            return Err(Error::invalid(format!("empty block window [{lo}, {hi}]")));
        }
    }
    let blocks = BlockNorms::compute(c, partition, params.p, eval)?;
    let profile = blocks.profile(params.s, params.q, params.j_range);
    Ok((profile.value, profile, blocks.flags()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermite::HermiteBasis;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn setup(n: usize) -> (HermiteBasis, DyadicPartition, LpEvaluator) {
        let b = HermiteBasis::new(1, n).unwrap();
        (b, DyadicPartition::for_basis(&b), LpEvaluator::default())
    }

    #[test]
    fn ground_state_is_a_single_block() {
        let (b, p, ev) = setup(16);
        let h0 = SpectralCoefficients::unit(b, &[0]).unwrap();
        for pe in [Exponent::ONE, Exponent::TWO, Exponent::INF] {
            let lp = ev.norm(&h0, pe).unwrap();
            for s in [-1.0, 0.0, 3.0] {
                for q in [Exponent::ONE, Exponent::INF] {
                    let (v, prof, flags) =
                        besov_norm(&h0, &p, &BesovParams::new(s, pe, q), &ev).unwrap();
                    assert!((v - lp).abs() < 1e-14);
                    assert_eq!(prof.weighted.iter().filter(|w| **w > 0.0).count(), 1);
                    assert!(flags.is_empty());
                }
            }
        }
    }

    #[test]
    fn close_to_l2_for_random_input() {
        let (b, p, ev) = setup(64);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let c = SpectralCoefficients::random(b, 64, &mut rng);
        let (v, _, flags) =
            besov_norm(&c, &p, &BesovParams::new(0.0, Exponent::TWO, Exponent::TWO), &ev).unwrap();
        assert!(flags.contains(Flags::UNRESOLVED));
        let rel = (v - c.norm()).abs() / c.norm();
        assert!(rel < 0.05, "{rel}");
        // B^0_{2,inf} <= L^2 <= B^0_{2,1}
        let blocks = BlockNorms::compute(&c, &p, Exponent::TWO, &ev).unwrap();
        assert!(blocks.besov(0.0, Exponent::INF) <= c.norm());
        assert!(c.norm() <= blocks.besov(0.0, Exponent::ONE));
    }

    #[test]
    fn window_restricts_blocks() {
        let (b, p, ev) = setup(32);
        let c = SpectralCoefficients::unit(b, &[20]).unwrap();
        let params = BesovParams::new(1.0, Exponent::TWO, Exponent::TWO).with_range(0, 1);
        let (v, prof, _) = besov_norm(&c, &p, &params, &ev).unwrap();
        assert_eq!(v, 0.0);
        assert_eq!(prof.j, vec![0, 1]);
        assert!(besov_norm(&c, &p, &params.with_range(2, 1), &ev).is_err());
    }
}
