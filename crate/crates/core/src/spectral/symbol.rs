use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::partition::{pow2, DyadicPartition};
use crate::error::{Error, Result};

type SymbolBody = dyn Fn(f64) -> f64 + Send + Sync;

/// Scalar symbol `m(l)` on `[0, inf)`, applied as `m(sqrt(H))`.
#[derive(Clone)]
pub struct SymbolFn {
    label: String,
    support: Option<(f64, f64)>,
    body: Arc<SymbolBody>,
}

impl fmt::Debug for SymbolFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SymbolFn")
            .field("label", &self.label)
            .field("support", &self.support)
            .finish()
    }
}

impl SymbolFn {
    /// Custom symbol. `support` is a closed interval outside which `m` vanishes.
    pub fn new(
        label: impl Into<String>,
        support: Option<(f64, f64)>,
        body: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            label: label.into(),
            support,
            body: Arc::new(body),
        }
    }

    pub fn constant(value: f64) -> Self {
        Self::new(format!("constant({value})"), None, move |_| value)
    }

    /// `phi_j`.
    pub fn block(p: &DyadicPartition, j: i32) -> Self {
        let p = *p;
        Self::new(format!("phi_{j}"), Some(p.support(j)), move |l| p.phi(j, l))
    }

    /// `Phi_j = phi_{j-1} + phi_j + phi_{j+1}`.
    pub fn widened(p: &DyadicPartition, j: i32) -> Self {
        let p = *p;
        Self::new(
            format!("Phi_{j}"),
            Some((pow2(j - 2), pow2(j + 2))),
            move |l| p.widened(j, l),
        )
    }

    /// Low part `psi`.
    pub fn low(p: &DyadicPartition) -> Self {
        let p = *p;
        Self::new("psi", Some((0.0, 2.0)), move |l| p.psi(l))
    }

    /// `e^{-t l^2}`, so that `m(sqrt(H)) = e^{-tH}`.
    pub fn heat(t: f64) -> Self {
        Self::new(format!("heat({t})"), None, move |l| (-t * l * l).exp())
    }

    /// `l^alpha`, so that `m(sqrt(H)) = H^{alpha/2}`.
    pub fn power(alpha: f64) -> Self {
        Self::new(format!("power({alpha})"), None, move |l| l.powf(alpha))
    }

    pub fn eval(&self, l: f64) -> f64 {
        (self.body)(l)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn support(&self) -> Option<(f64, f64)> {
        self.support
    }

    /// Largest `|m|` on `[from, inf)`, sampled; exact zero when the support ends first.
    pub fn sup_beyond(&self, from: f64) -> f64 {
        let hi = match self.support {
            Some((_, hi)) if hi <= from => return 0.0,
            Some((_, hi)) => hi,
            None => 8.0 * from.max(1.0),
        };
        let samples = 256;
        let ratio = (hi / from.max(f64::MIN_POSITIVE)).ln();
        (0..=samples)
            .map(|i| {
                let l = from * (ratio * i as f64 / samples as f64).exp();
                self.eval(l).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// Symbols that configuration files may name.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SymbolSpec {
    Constant { value: f64 },
    Bump { j: i32 },
    Widened { j: i32 },
    Low,
    GaussianDecay { t: f64 },
    Power { alpha: f64 },
}

impl SymbolSpec {
    pub fn build(&self, p: &DyadicPartition) -> Result<SymbolFn> {
        Ok(match *self {
            SymbolSpec::Constant { value } => SymbolFn::constant(value),
            SymbolSpec::Bump { j } => SymbolFn::block(p, j),
            SymbolSpec::Widened { j } => SymbolFn::widened(p, j),
            SymbolSpec::Low => SymbolFn::low(p),
            SymbolSpec::GaussianDecay { t } => {
                if !(t > 0.0) {
                    return Err(Error::invalid("gaussian decay needs t > 0"));
                }
                SymbolFn::heat(t)
            }
            SymbolSpec::Power { alpha } => SymbolFn::power(alpha),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::build_partition;

    #[test]
    fn named_symbols() {
        let p = build_partition(1, 16).unwrap();
        assert_eq!(SymbolFn::block(&p, 0).eval(1.0), 1.0);
        assert_eq!(SymbolFn::low(&p).eval(0.3), 1.0);
        assert!((SymbolFn::heat(0.5).eval(2.0) - (-2.0f64).exp()).abs() < 1e-15);
        assert_eq!(SymbolFn::power(2.0).eval(3.0), 9.0);
    }

    #[test]
    fn sup_beyond_respects_support() {
        let p = build_partition(1, 128).unwrap();
        let top = 257f64.sqrt();
        assert_eq!(SymbolFn::block(&p, 3).sup_beyond(top), 0.0);
        assert!(SymbolFn::block(&p, 4).sup_beyond(top) > 0.5);
        // support just starts past the top eigenvalue
        assert!(SymbolFn::block(&p, 5).sup_beyond(top) > 0.5);
        assert!(SymbolFn::heat(1.0).sup_beyond(top) < 1e-100);
    }

    #[test]
    fn spec_round_trip() {
        let s = SymbolSpec::GaussianDecay { t: 0.5 };
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(text, r#"{"kind":"gaussian_decay","t":0.5}"#);
        let back: SymbolSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
        let p = build_partition(1, 4).unwrap();
        assert!(SymbolSpec::GaussianDecay { t: 0.0 }.build(&p).is_err());
    }
}
