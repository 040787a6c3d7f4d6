use serde::{Deserialize, Serialize};

use super::smoothing::log_space;
use crate::besov::{BlockNorms, Exponent, LpEvaluator};
use crate::error::{Error, Result};
use crate::flags::{Flags, Ratio};
use crate::hermite::SpectralCoefficients;
use crate::spectral::{pow2, DyadicPartition};

pub const DEFAULT_TIME_NODES: usize = 200;
pub const DEFAULT_T_MIN: f64 = 1e-6;

/// The space `X` measuring `(tH)^{s0} e^{-tH} f`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum XKind {
    Lp,
    /// `B^0_{p,r}`.
    Besov { r: Exponent },
}

impl std::fmt::Display for XKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            XKind::Lp => write!(f, "Lp"),
            XKind::Besov { r } => write!(f, "B0_r{r}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SemigroupNormParams {
    pub s: f64,
    pub s0: f64,
    pub p: Exponent,
    pub q: Exponent,
    pub x: XKind,
    pub nodes: usize,
    pub t_min: f64,
}

impl SemigroupNormParams {
    pub fn new(s: f64, s0: f64, p: Exponent, q: Exponent, x: XKind) -> Self {
        Self {
            s,
            s0,
            p,
            q,
            x,
            nodes: DEFAULT_TIME_NODES,
            t_min: DEFAULT_T_MIN,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.s0 > self.s / 2.0) {
            return Err(Error::invalid(format!(
                "semigroup norm needs s0 > s/2 (s = {}, s0 = {})",
                self.s, self.s0
            )));
        }
        if self.nodes < 8 || !(self.t_min > 0.0) {
            return Err(Error::invalid("semigroup norm needs >= 8 nodes and t_min > 0"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SemigroupNorm {
    pub value: f64,
    /// Estimate of the omitted `(0, t_min)` contribution to the integral.
    pub cutoff_error: f64,
    pub flags: Flags,
}

/// Weights of a fourth-order Gregory rule for `n >= 8` equispaced nodes of unit spacing.
pub fn gregory_weights(n: usize) -> Vec<f64> {
    const END: [f64; 3] = [3.0 / 8.0, 7.0 / 6.0, 23.0 / 24.0];
    let mut w = vec![1.0; n];
    for (i, e) in END.iter().enumerate() {
        w[i] = *e;
        w[n - 1 - i] = *e;
    }
    w
}

/// `{ int_0^{T} (t^{-s/2} ||(tH)^{s0} e^{-tH} f||_X)^q dt/t }^{1/q}` with `T = 2^{-2 j0}`.
///
/// The integral runs over log-spaced nodes on `[t_min, T]`; `q = inf` takes the sup over the nodes.
pub fn semigroup_norm(
    f: &SpectralCoefficients,
    partition: &DyadicPartition,
    params: &SemigroupNormParams,
    eval: &LpEvaluator,
) -> Result<SemigroupNorm> {
    Ok(semigroup_norms(f, partition, std::slice::from_ref(params), eval)?.remove(0))
}

/// [`semigroup_norm`] for several spaces `X` at once. The parameter sets may
/// differ only in `x`; block norms at each time node are shared between them.
pub fn semigroup_norms(
    f: &SpectralCoefficients,
    partition: &DyadicPartition,
    params: &[SemigroupNormParams],
    eval: &LpEvaluator,
) -> Result<Vec<SemigroupNorm>> {
    let Some(first) = params.first() else {
        return Ok(Vec::new());
    };
    first.validate()?;
    if params.iter().any(|q| SemigroupNormParams { x: first.x, ..*q } != *first) {
        return Err(Error::invalid("semigroup norms computed together must differ only in X"));
    }
    partition.check_basis(&f.basis())?;
    let basis = f.basis();
    let upper = pow2(-2 * partition.j0());
    let times = log_space(first.t_min, upper, first.nodes);
    let needs_lp = params.iter().any(|q| q.x == XKind::Lp);
    let needs_blocks = params.iter().any(|q| q.x != XKind::Lp);
    let mut flags = Flags::when(f.is_lossy(), Flags::LOSSY);
    let mut values = vec![Vec::with_capacity(times.len()); params.len()];
    for &t in &times {
        let g = f.map_diagonal(|k| {
            let tl = t * basis.eigenvalue(k);
            tl.powf(first.s0) * (-tl).exp()
        });
        let lp = if needs_lp { eval.norm(&g, first.p)? } else { 0.0 };
        let blocks = if needs_blocks {
            let b = BlockNorms::compute(&g, partition, first.p, eval)?;
            flags |= b.flags();
            Some(b)
        } else {
            None
        };
        let weight = t.powf(-first.s / 2.0);
        for (v, q) in values.iter_mut().zip(params) {
            let x = match (q.x, &blocks) {
                (XKind::Besov { r }, Some(b)) => b.besov(0.0, r),
                _ => lp,
            };
            v.push(weight * x);
        }
    }
    let decay = first.s0 - first.s / 2.0;
    Ok(values
        .iter()
        .map(|values| {
            let (value, cutoff_error) = match first.q {
                Exponent::Infinity => (values.iter().cloned().fold(0.0, f64::max), values[0]),
                Exponent::Finite(q) => {
                    let h = (upper / first.t_min).ln() / (first.nodes - 1) as f64;
                    let sum: f64 = gregory_weights(first.nodes)
                        .iter()
                        .zip(values)
                        .map(|(w, v)| w * v.powf(q))
                        .sum();
                    let cut = values[0].powf(q) / (decay * q);
                    ((h * sum).powf(1.0 / q), cut)
                }
            };
            SemigroupNorm {
                value,
                cutoff_error,
                flags,
            }
        })
        .collect())
}

/// `semigroup_norm / ||f||_{B^s_{p,q}}`.
pub fn equivalence_ratio(
    f: &SpectralCoefficients,
    partition: &DyadicPartition,
    params: &SemigroupNormParams,
    eval: &LpEvaluator,
) -> Result<Ratio> {
    let sg = semigroup_norm(f, partition, params, eval)?;
    let b = BlockNorms::compute(f, partition, params.p, eval)?;
    Ok(Ratio::of(sg.value, b.besov(params.s, params.q)).with(sg.flags | b.flags()))
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
    fn ground_state_matches_closed_form() {
        let (b, p, ev) = setup(16);
        let h0 = SpectralCoefficients::unit(b, &[0]).unwrap();
        let params = SemigroupNormParams::new(0.0, 1.0, Exponent::TWO, Exponent::TWO, XKind::Lp);
        let got = semigroup_norm(&h0, &p, &params, &ev).unwrap();
        // int_0^4 (t e^{-t})^2 dt / t = 1/4 - (9/4) e^{-8}
        let want = (0.25 - 2.25 * (-8.0f64).exp()).sqrt();
        assert!((got.value - want).abs() < 1e-6 * want, "{} vs {want}", got.value);
        assert!(got.cutoff_error < 1e-11);
        let sup = SemigroupNormParams {
            q: Exponent::INF,
            ..params
        };
        let got = semigroup_norm(&h0, &p, &sup, &ev).unwrap().value;
        assert!((got - (-1.0f64).exp()).abs() < 1e-3);
    }

    #[test]
    fn rejects_small_s0_and_zero_is_zero() {
        let (b, p, ev) = setup(8);
        let bad = SemigroupNormParams::new(2.0, 1.0, Exponent::TWO, Exponent::TWO, XKind::Lp);
        assert!(semigroup_norm(&SpectralCoefficients::zeros(b), &p, &bad, &ev).is_err());
        let ok = SemigroupNormParams::new(1.0, 1.0, Exponent::TWO, Exponent::TWO, XKind::Lp);
        let z = semigroup_norm(&SpectralCoefficients::zeros(b), &p, &ok, &ev).unwrap();
        assert_eq!(z.value, 0.0);
    }

    #[test]
    fn ratio_is_two_sided_on_random_input() {
        let (b, p, ev) = setup(32);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f = SpectralCoefficients::random(b, 32, &mut rng);
        for x in [XKind::Lp, XKind::Besov { r: Exponent::TWO }] {
            let params = SemigroupNormParams::new(1.0, 1.0, Exponent::TWO, Exponent::TWO, x);
            let r = equivalence_ratio(&f, &p, &params, &ev).unwrap().value;
            assert!(r > 0.1 && r < 10.0, "{x}: {r}");
        }
    }

    #[test]
    fn joint_evaluation_matches_single() {
        let (b, p, ev) = setup(24);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let f = SpectralCoefficients::random(b, 24, &mut rng);
        let base = SemigroupNormParams::new(0.5, 1.0, Exponent::INF, Exponent::ONE, XKind::Lp);
        let all: Vec<_> = [XKind::Lp, XKind::Besov { r: Exponent::TWO }]
            .into_iter()
            .map(|x| SemigroupNormParams { x, ..base })
            .collect();
        let joint = semigroup_norms(&f, &p, &all, &ev).unwrap();
        for (j, params) in joint.iter().zip(&all) {
            assert_eq!(j.value, semigroup_norm(&f, &p, params, &ev).unwrap().value);
        }
        let clash = [base, SemigroupNormParams { s: 0.25, ..base }];
        assert!(semigroup_norms(&f, &p, &clash, &ev).is_err());
    }

    #[test]
    fn gregory_integrates_cubics() {
        let n = 11;
        let w = gregory_weights(n);
        let h = 1.0 / (n - 1) as f64;
        let s: f64 = (0..n).map(|i| w[i] * (i as f64 * h).powi(3)).sum::<f64>() * h;
        assert!((s - 0.25).abs() < 1e-14);
    }
}
