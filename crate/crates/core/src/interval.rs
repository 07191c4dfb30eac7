//! Rational intervals with open/closed endpoints and integer counting.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::ExactRational;

/// Upper endpoint of an interval; `Infinite` marks an interval unbounded above.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UpperBound {
    Finite(ExactRational),
    Infinite,
}

impl fmt::Display for UpperBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UpperBound::Finite(r) => write!(f, "{r}"),
            UpperBound::Infinite => f.write_str("inf"),
        }
    }
}

/// Interval of rationals. Invariant: `lo < hi`, or `lo == hi` with both ends closed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalInterval {
    lo: ExactRational,
    hi: UpperBound,
    lo_open: bool,
    hi_open: bool,
}

impl RationalInterval {
    pub fn new(lo: ExactRational, lo_open: bool, hi: UpperBound, hi_open: bool) -> Result<Self> {
        let hi_open = match &hi {
            UpperBound::Infinite => true,
            UpperBound::Finite(h) => {
                let ok = lo < *h || (lo == *h && !lo_open && !hi_open);
                if !ok {
                    return Err(Error::InvalidInterval(format!(
                        "{}{lo}, {h}{}",
                        if lo_open { '(' } else { '[' },
                        if hi_open { ')' } else { ']' }
                    )));
                }
                hi_open
            }
        };
        Ok(Self {
            lo,
            hi,
            lo_open,
            hi_open,
        })
    }

    pub fn open(lo: ExactRational, hi: ExactRational) -> Result<Self> {
        Self::new(lo, true, UpperBound::Finite(hi), true)
    }

    pub fn closed(lo: ExactRational, hi: ExactRational) -> Result<Self> {
        Self::new(lo, false, UpperBound::Finite(hi), false)
    }

    /// `(lo, inf)`
    pub fn unbounded_above(lo: ExactRational) -> Self {
        Self {
            lo,
            hi: UpperBound::Infinite,
            lo_open: true,
            hi_open: true,
        }
    }

    pub fn lo(&self) -> &ExactRational {
        &self.lo
    }

    pub fn hi(&self) -> &UpperBound {
        &self.hi
    }

    /// Finite upper endpoint, if any.
    pub fn hi_value(&self) -> Option<&ExactRational> {
        match &self.hi {
            UpperBound::Finite(h) => Some(h),
            UpperBound::Infinite => None,
        }
    }

    pub fn lo_open(&self) -> bool {
        self.lo_open
    }

    pub fn hi_open(&self) -> bool {
        self.hi_open
    }

    pub fn is_bounded(&self) -> bool {
        matches!(self.hi, UpperBound::Finite(_))
    }

    pub fn width(&self) -> Option<ExactRational> {
        self.hi_value().map(|h| h - &self.lo)
    }

    pub fn midpoint(&self) -> Option<ExactRational> {
        let half = ExactRational::new(1, 2).expect("nonzero");
        self.hi_value().map(|h| (h + &self.lo) * half)
    }

    pub fn contains(&self, x: &ExactRational) -> bool {
        let above_lo = if self.lo_open {
            *x > self.lo
        } else {
            *x >= self.lo
        };
        let below_hi = match &self.hi {
            UpperBound::Infinite => true,
            UpperBound::Finite(h) if self.hi_open => x < h,
            UpperBound::Finite(h) => x <= h,
        };
        above_lo && below_hi
    }

    /// Distance from `x` to the closure of the interval (zero when inside).
    pub fn distance_to(&self, x: &ExactRational) -> ExactRational {
        if *x < self.lo {
            return &self.lo - x;
        }
        match &self.hi {
            UpperBound::Finite(h) if x > h => x - h,
            _ => ExactRational::zero(),
        }
    }

    /// True when `self` lies inside `outer`, endpoint flags respected.
    pub fn is_subset_of(&self, outer: &RationalInterval) -> bool {
        let lo_ok = match self.lo.cmp(&outer.lo) {
            std::cmp::Ordering::Greater => true,
            std::cmp::Ordering::Equal => !outer.lo_open || self.lo_open,
            std::cmp::Ordering::Less => false,
        };
        let hi_ok = match (&self.hi, &outer.hi) {
            (_, UpperBound::Infinite) => true,
            (UpperBound::Infinite, UpperBound::Finite(_)) => false,
            (UpperBound::Finite(a), UpperBound::Finite(b)) => match a.cmp(b) {
                std::cmp::Ordering::Less => true,
                std::cmp::Ordering::Equal => !outer.hi_open || self.hi_open,
                std::cmp::Ordering::Greater => false,
            },
        };
        lo_ok && hi_ok
    }

    /// Smallest integer in the interval.
    pub fn smallest_integer(&self) -> Option<BigInt> {
        let mut k = self.lo.ceil();
        if self.lo_open && self.lo.is_integer() {
            k += 1;
        }
        if self.contains(&ExactRational::from_integer(k.clone())) {
            Some(k)
        } else {
            None
        }
    }

    /// Largest integer in the interval; `None` if unbounded or empty of integers.
    pub fn largest_integer(&self) -> Option<BigInt> {
        let h = self.hi_value()?;
        let mut k = h.floor();
        if self.hi_open && h.is_integer() {
            k -= 1;
        }
        if self.contains(&ExactRational::from_integer(k.clone())) {
            Some(k)
        } else {
            None
        }
    }

    /// `[lo, hi]` in the usual bracket notation.
    pub fn to_bracket_string(&self) -> String {
        format!(
            "{}{}, {}{}",
            if self.lo_open { '(' } else { '[' },
            self.lo,
            self.hi,
            if self.hi_open { ')' } else { ']' }
        )
    }
}

impl fmt::Display for RationalInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bracket_string())
    }
}

impl Serialize for RationalInterval {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("RationalInterval", 4)?;
        s.serialize_field("lo", &self.lo)?;
        s.serialize_field("hi", &self.hi.to_string())?;
        s.serialize_field("lo_open", &self.lo_open)?;
        s.serialize_field("hi_open", &self.hi_open)?;
        s.end()
    }
}

/// Number of integers in an interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IntegerCount {
    Finite(BigInt),
    Infinite,
}

impl IntegerCount {
    pub fn is_exactly(&self, n: u64) -> bool {
        matches!(self, IntegerCount::Finite(c) if *c == BigInt::from(n))
    }
}

impl fmt::Display for IntegerCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IntegerCount::Finite(n) => write!(f, "{n}"),
            IntegerCount::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for IntegerCount {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Exact number of integers `k` in `iv`, honoring endpoint strictness.
pub fn count_integers_in(iv: &RationalInterval) -> IntegerCount {
    let Some(h) = iv.hi_value() else {
        return IntegerCount::Infinite;
    };
    let mut first = iv.lo.ceil();
    if iv.lo_open && iv.lo.is_integer() {
        first += 1;
    }
    let mut last = h.floor();
    if iv.hi_open && h.is_integer() {
        last -= 1;
    }
    let n = last - first + BigInt::one();
    IntegerCount::Finite(if n < BigInt::zero() {
        BigInt::zero()
    } else {
        n
    })
}
