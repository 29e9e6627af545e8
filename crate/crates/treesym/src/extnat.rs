//! Exact arithmetic over the extended naturals `{0, 1, 2, ...} ∪ {omega}`.
//!
//! Multiplicities, orbit cardinalities and local group degrees all live in
//! this type. `omega` stands for the first infinite cardinal; it absorbs
//! addition and multiplication by nonzero values, and `0 * omega = 0`
//! (no copies of anything is nothing).

use std::fmt;
use std::ops::{Add, Mul};
use std::str::FromStr;

use serde::de::{self, Deserializer, Visitor};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

/// A natural number or `omega`. The derived order puts every finite value
/// below `Omega` and compares finite values numerically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtNat {
    Fin(u64),
    Omega,
}

pub use ExtNat::{Fin, Omega};

impl ExtNat {
    pub const ZERO: ExtNat = Fin(0);
    pub const ONE: ExtNat = Fin(1);

    pub fn is_finite(self) -> bool {
        matches!(self, Fin(_))
    }

    pub fn as_finite(self) -> Option<u64> {
        match self {
            Fin(n) => Some(n),
            Omega => None,
        }
    }

    pub fn is_zero(self) -> bool {
        self == Fin(0)
    }

    /// Exact addition; `None` on finite overflow.
    pub fn checked_add(self, other: ExtNat) -> Option<ExtNat> {
        match (self, other) {
            (Fin(a), Fin(b)) => a.checked_add(b).map(Fin),
            _ => Some(Omega),
        }
    }

    /// Exact multiplication with `0 * omega = 0`; `None` on finite overflow.
    pub fn checked_mul(self, other: ExtNat) -> Option<ExtNat> {
        match (self, other) {
            (Fin(a), Fin(b)) => a.checked_mul(b).map(Fin),
            (Fin(0), Omega) | (Omega, Fin(0)) => Some(Fin(0)),
            _ => Some(Omega),
        }
    }

    /// `self - k` for finite `k`: `omega - k = omega`, finite values must
    /// not underflow.
    pub fn minus_finite(self, k: u64) -> Option<ExtNat> {
        match self {
            Fin(n) => n.checked_sub(k).map(Fin),
            Omega => Some(Omega),
        }
    }

    pub fn max(self, other: ExtNat) -> ExtNat {
        std::cmp::max(self, other)
    }
}

impl Add for ExtNat {
    type Output = ExtNat;
    fn add(self, other: ExtNat) -> ExtNat {
        self.checked_add(other).expect("extended natural overflow in +")
    }
}

impl Mul for ExtNat {
    type Output = ExtNat;
    fn mul(self, other: ExtNat) -> ExtNat {
        self.checked_mul(other).expect("extended natural overflow in *")
    }
}

impl fmt::Display for ExtNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fin(n) => write!(f, "{n}"),
            Omega => write!(f, "omega"),
        }
    }
}

impl FromStr for ExtNat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "omega" {
            Ok(Omega)
        } else {
            s.parse::<u64>()
                .map(Fin)
                .map_err(|_| format!("expected a nonnegative integer or `omega`, got `{s}`"))
        }
    }
}

impl Serialize for ExtNat {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ExtNat {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = ExtNat;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "a nonnegative integer or the string \"omega\"")
            }
            fn visit_str<E: de::Error>(self, s: &str) -> Result<ExtNat, E> {
                s.parse().map_err(E::custom)
            }
            fn visit_u64<E: de::Error>(self, n: u64) -> Result<ExtNat, E> {
                Ok(Fin(n))
            }
        }
        de.deserialize_any(V)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLES: [ExtNat; 7] = [Fin(0), Fin(1), Fin(2), Fin(3), Fin(5), Fin(17), Omega];

    #[test]
    fn addition_laws() {
        for &a in &SAMPLES {
            for &b in &SAMPLES {
                assert_eq!(a + b, b + a);
                for &c in &SAMPLES {
                    assert_eq!((a + b) + c, a + (b + c));
                }
            }
        }
        for &a in &SAMPLES {
            assert_eq!(Omega + a, Omega);
            assert_eq!(a + Fin(0), a);
        }
    }

    #[test]
    fn multiplication_laws() {
        for &a in &SAMPLES {
            for &b in &SAMPLES {
                assert_eq!(a * b, b * a);
                for &c in &SAMPLES {
                    assert_eq!((a * b) * c, a * (b * c));
                }
            }
        }
        // omega absorbs nonzero factors, and 0 * omega = 0
        for k in 1..=5u64 {
            assert_eq!(Omega * Fin(k), Omega);
        }
        assert_eq!(Fin(0) * Omega, Fin(0));
        assert_eq!(Omega * Fin(0), Fin(0));
        assert_eq!(Omega * Omega, Omega);
    }

    #[test]
    fn subtraction_of_finite() {
        assert_eq!(Omega.minus_finite(1_000_000), Some(Omega));
        assert_eq!(Fin(5).minus_finite(2), Some(Fin(3)));
        assert_eq!(Fin(1).minus_finite(2), None);
    }

    #[test]
    fn ordering_and_max() {
        assert!(Fin(0) < Fin(1));
        assert!(Fin(u64::MAX) < Omega);
        assert_eq!(Fin(3).max(Omega), Omega);
        assert_eq!(Fin(3).max(Fin(2)), Fin(3));
    }

    #[test]
    fn parse_display_roundtrip() {
        for &a in &SAMPLES {
            assert_eq!(a.to_string().parse::<ExtNat>().unwrap(), a);
        }
        assert!("minus".parse::<ExtNat>().is_err());
    }

    #[test]
    fn overflow_is_detected() {
        assert_eq!(Fin(u64::MAX).checked_add(Fin(1)), None);
        assert_eq!(Fin(u64::MAX).checked_mul(Fin(2)), None);
    }
}
