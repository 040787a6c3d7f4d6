//! Diagnostic flags attached to measured quantities, and guarded ratios.

use std::fmt;
use std::ops::{BitOr, BitOrAssign};

use serde::{Deserialize, Serialize};

/// Bitset of diagnostics. Flags never abort a sweep; they travel with the value.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Flags(u32);

impl Flags {
    pub const NONE: Flags = Flags(0);
    /// A ratio had a zero denominator and was defined as 0.
    pub const ZERO_DENOMINATOR: Flags = Flags(1);
    /// The input carries mass at the top of its basis or a symbol is not negligible there.
    pub const UNRESOLVED: Flags = Flags(1 << 1);
    /// A product projection left more than the allowed energy in its tail.
    pub const ALIASED: Flags = Flags(1 << 2);
    /// A degree-raising operation dropped mass.
    pub const LOSSY: Flags = Flags(1 << 3);
    /// A rate fit saw too little spectral spread to be meaningful.
    pub const NARROWBAND: Flags = Flags(1 << 4);
    /// A measured constant exceeded its configured budget.
    pub const BUDGET_VIOLATION: Flags = Flags(1 << 5);

    const NAMES: [(Flags, &'static str); 6] = [
        (Flags::ZERO_DENOMINATOR, "zero_denominator"),
        (Flags::UNRESOLVED, "unresolved"),
        (Flags::ALIASED, "aliased"),
        (Flags::LOSSY, "lossy"),
        (Flags::NARROWBAND, "narrowband"),
        (Flags::BUDGET_VIOLATION, "budget_violation"),
    ];

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, other: Flags) -> bool {
        self.0 & other.0 == other.0
    }

    pub fn when(cond: bool, flag: Flags) -> Flags {
        if cond {
            flag
        } else {
            Flags::NONE
        }
    }
}

impl BitOr for Flags {
    type Output = Flags;

    fn bitor(self, rhs: Flags) -> Flags {
        Flags(self.0 | rhs.0)
    }
}

impl BitOrAssign for Flags {
    fn bitor_assign(&mut self, rhs: Flags) {
        self.0 |= rhs.0;
    }
}

/// Names joined by `|`, or empty.
impl fmt::Display for Flags {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (flag, name) in Flags::NAMES {
            if self.contains(flag) {
                if !first {
                    f.write_str("|")?;
                }
                f.write_str(name)?;
                first = false;
            }
        }
        Ok(())
    }
}

/// A measured ratio together with its diagnostics.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ratio {
    pub value: f64,
    pub flags: Flags,
}

impl Ratio {
    /// `num / den`, or 0 flagged [`Flags::ZERO_DENOMINATOR`] when `den` is 0.
    pub fn of(num: f64, den: f64) -> Ratio {
        if den == 0.0 {
            Ratio {
                value: 0.0,
                flags: Flags::ZERO_DENOMINATOR,
            }
        } else {
            Ratio {
                value: num / den,
                flags: Flags::NONE,
            }
        }
    }

    pub fn with(mut self, flags: Flags) -> Ratio {
        self.flags |= flags;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_lists_names() {
        let f = Flags::UNRESOLVED | Flags::ALIASED;
        assert_eq!(f.to_string(), "unresolved|aliased");
        assert_eq!(Flags::NONE.to_string(), "");
        assert!(f.contains(Flags::ALIASED));
        assert!(!f.contains(Flags::LOSSY));
    }

    #[test]
    fn zero_denominator() {
        let r = Ratio::of(0.0, 0.0);
        assert_eq!(r.value, 0.0);
        assert!(r.flags.contains(Flags::ZERO_DENOMINATOR));
        assert_eq!(Ratio::of(3.0, 2.0).value, 1.5);
    }
}
