use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Integrability or summability exponent in `[1, inf]`, with infinity kept distinct.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    pub const ONE: Exponent = Exponent::Finite(1.0);
    pub const TWO: Exponent = Exponent::Finite(2.0);
    pub const INF: Exponent = Exponent::Infinity;

    /// Accepts `p >= 1`; `f64::INFINITY` maps to [`Exponent::Infinity`].
    pub fn new(p: f64) -> Result<Self> {
        if p == f64::INFINITY {
            Ok(Exponent::Infinity)
        } else if p >= 1.0 && p.is_finite() {
            Ok(Exponent::Finite(p))
        } else {
            Err(Error::invalid(format!("exponent {p} outside [1, inf]")))
        }
    }

    /// The exponent as a float, with `f64::INFINITY` for infinity.
    pub fn value(self) -> f64 {
        match self {
            Exponent::Finite(p) => p,
            Exponent::Infinity => f64::INFINITY,
        }
    }

    /// `1/p`, exactly 0 for infinity.
    pub fn recip(self) -> f64 {
        match self {
            Exponent::Finite(p) => 1.0 / p,
            Exponent::Infinity => 0.0,
        }
    }

    /// Exponent with the given reciprocal; 0 gives infinity.
    pub fn from_recip(r: f64) -> Result<Self> {
        if r == 0.0 {
            Ok(Exponent::Infinity)
        } else {
            Exponent::new(1.0 / r)
        }
    }

    /// Hölder conjugate.
    pub fn conjugate(self) -> Self {
        Exponent::from_recip(1.0 - self.recip()).expect("conjugate of an exponent in [1, inf]")
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Exponent::Infinity)
    }

    /// `(sum |a|^p)^{1/p}`, or the max for infinity.
    pub fn sequence_norm(self, values: &[f64]) -> f64 {
        match self {
            Exponent::Infinity => values.iter().map(|v| v.abs()).fold(0.0, f64::max),
            Exponent::Finite(p) if p == 1.0 => values.iter().map(|v| v.abs()).sum(),
            Exponent::Finite(p) if p == 2.0 => values.iter().map(|v| v * v).sum::<f64>().sqrt(),
            Exponent::Finite(p) => {
                // scale by the max to keep large powers finite
                let top = values.iter().map(|v| v.abs()).fold(0.0, f64::max);
                if top == 0.0 {
                    return 0.0;
                }
                let s: f64 = values.iter().map(|v| (v.abs() / top).powf(p)).sum();
                top * s.powf(1.0 / p)
            }
        }
    }
}

/// Checks `1/p = 1/p1 + 1/p2` to roundoff.
pub fn holder_ok(p: Exponent, p1: Exponent, p2: Exponent) -> bool {
    (p.recip() - p1.recip() - p2.recip()).abs() < 1e-12
}

pub(crate) fn require_holder(p: Exponent, p1: Exponent, p2: Exponent) -> Result<()> {
    if holder_ok(p, p1, p2) {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "Hölder relation 1/{p} = 1/{p1} + 1/{p2} fails"
        )))
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" => Ok(Exponent::Infinity),
            other => {
                let v: f64 = other
                    .parse()
                    .map_err(|_| Error::invalid(format!("cannot read exponent '{s}'")))?;
                Exponent::new(v)
            }
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Exponent::Finite(p) => serializer.serialize_f64(*p),
            Exponent::Infinity => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Num(f64),
            Text(String),
        }
        let parsed = match Raw::deserialize(deserializer)? {
            Raw::Int(v) => Exponent::new(v as f64),
            Raw::Num(v) => Exponent::new(v),
            Raw::Text(s) => s.parse(),
        };
        parsed.map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parsing_and_display() {
        assert_eq!("inf".parse::<Exponent>().unwrap(), Exponent::Infinity);
        assert_eq!("2".parse::<Exponent>().unwrap(), Exponent::TWO);
        assert!("0.5".parse::<Exponent>().is_err());
        assert_eq!(Exponent::INF.to_string(), "inf");
        assert_eq!(Exponent::new(f64::INFINITY).unwrap(), Exponent::INF);
    }

    #[test]
    fn serde_forms() {
        #[derive(Serialize, Deserialize)]
        struct W {
            p: Exponent,
            q: Exponent,
        }
        let w: W = toml::from_str("p = 2\nq = \"inf\"").unwrap();
        assert_eq!(w.p, Exponent::TWO);
        assert_eq!(w.q, Exponent::INF);
        assert_eq!(serde_json::to_string(&Exponent::INF).unwrap(), "\"inf\"");
    }

    #[test]
    fn sequence_norms_are_monotone() {
        let a = [3.0, 4.0, 0.5, 1e-3];
        let one = Exponent::ONE.sequence_norm(&a);
        let two = Exponent::TWO.sequence_norm(&a);
        let three = Exponent::Finite(3.0).sequence_norm(&a);
        let inf = Exponent::INF.sequence_norm(&a);
        assert!(inf <= three && three <= two && two <= one);
        assert_eq!(inf, 4.0);
    }

    #[test]
    fn holder() {
        assert!(holder_ok(Exponent::TWO, Exponent::INF, Exponent::TWO));
        assert!(holder_ok(Exponent::ONE, Exponent::TWO, Exponent::TWO));
        assert!(!holder_ok(Exponent::TWO, Exponent::TWO, Exponent::TWO));
        assert_eq!(Exponent::ONE.conjugate(), Exponent::INF);
        assert_eq!(Exponent::Finite(4.0).conjugate(), Exponent::Finite(4.0 / 3.0));
    }
}
