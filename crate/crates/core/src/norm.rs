use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Serialize, Serializer};

/// Base-q logarithm of the absolute value |x| = q^deg(x).
///
/// `NEG_INF` is the degree of zero and compares below every finite degree.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct NormDeg(Option<i64>);

impl NormDeg {
    pub const NEG_INF: NormDeg = NormDeg(None);

    pub const fn finite(d: i64) -> Self {
        NormDeg(Some(d))
    }

    pub fn value(self) -> Option<i64> {
        self.0
    }

    pub fn is_neg_inf(self) -> bool {
        self.0.is_none()
    }

    /// The finite value; panics on `NEG_INF`.
    pub fn unwrap(self) -> i64 {
        self.0.expect("degree of zero")
    }
}

impl From<i64> for NormDeg {
    fn from(d: i64) -> Self {
        NormDeg(Some(d))
    }
}

impl Add for NormDeg {
    type Output = NormDeg;
    fn add(self, rhs: NormDeg) -> NormDeg {
        match (self.0, rhs.0) {
            (Some(a), Some(b)) => NormDeg(Some(a + b)),
            _ => NormDeg::NEG_INF,
        }
    }
}

impl Add<i64> for NormDeg {
    type Output = NormDeg;
    fn add(self, rhs: i64) -> NormDeg {
        NormDeg(self.0.map(|a| a + rhs))
    }
}

impl Sub<i64> for NormDeg {
    type Output = NormDeg;
    fn sub(self, rhs: i64) -> NormDeg {
        NormDeg(self.0.map(|a| a - rhs))
    }
}

impl Neg for NormDeg {
    type Output = Option<i64>;
    fn neg(self) -> Option<i64> {
        self.0.map(|a| -a)
    }
}

impl PartialEq<i64> for NormDeg {
    fn eq(&self, other: &i64) -> bool {
        self.0 == Some(*other)
    }
}

impl PartialOrd<i64> for NormDeg {
    fn partial_cmp(&self, other: &i64) -> Option<std::cmp::Ordering> {
        Some(self.cmp(&NormDeg(Some(*other))))
    }
}

impl fmt::Display for NormDeg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Some(d) => write!(f, "{d}"),
            None => f.write_str("-inf"),
        }
    }
}

impl fmt::Debug for NormDeg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for NormDeg {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0 {
            Some(d) => s.serialize_i64(d),
            None => s.serialize_str("-inf"),
        }
    }
}
