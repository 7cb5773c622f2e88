//! Certified enclosures `[lo, hi]` with exact rational endpoints.

use std::fmt;

use num_rational::BigRational;
use num_traits::Signed;

use super::quad::Quad;
use super::rational::{self, ExactRational};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BoundedValue {
    lo: ExactRational,
    hi: ExactRational,
}

impl BoundedValue {
    pub fn new(lo: ExactRational, hi: ExactRational) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidInput(format!(
                "empty enclosure [{}, {}]",
                rational::format_rational(&lo),
                rational::format_rational(&hi)
            )));
        }
        Ok(BoundedValue { lo, hi })
    }

    /// Enclosure from two endpoints in either order.
    pub fn spanning(a: ExactRational, b: ExactRational) -> Self {
        if a <= b {
            BoundedValue { lo: a, hi: b }
        } else {
            BoundedValue { lo: b, hi: a }
        }
    }

    pub fn point(x: ExactRational) -> Self {
        BoundedValue {
            lo: x.clone(),
            hi: x,
        }
    }

    /// `[x - w/2, x + w/2]`.
    pub fn around(x: ExactRational, width: &ExactRational) -> Self {
        let half = width.abs() / rational::int(2);
        BoundedValue {
            lo: &x - &half,
            hi: x + half,
        }
    }

    pub fn lo(&self) -> &ExactRational {
        &self.lo
    }

    pub fn hi(&self) -> &ExactRational {
        &self.hi
    }

    pub fn width(&self) -> ExactRational {
        &self.hi - &self.lo
    }

    pub fn width_f64(&self) -> f64 {
        rational::to_f64(&self.width())
    }

    pub fn lo_f64(&self) -> f64 {
        rational::to_f64(&self.lo)
    }

    pub fn hi_f64(&self) -> f64 {
        rational::to_f64(&self.hi)
    }

    pub fn mid(&self) -> ExactRational {
        (&self.lo + &self.hi) / rational::int(2)
    }

    pub fn mid_f64(&self) -> f64 {
        rational::to_f64(&self.mid())
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_quad(&self, x: &Quad) -> bool {
        x.cmp_rational(&self.lo).is_ge() && x.cmp_rational(&self.hi).is_le()
    }

    /// True if the enclosure lies within `[x - eps, x + eps]` for real `x` given as f64.
    pub fn within_of(&self, x: f64, eps: f64) -> bool {
        self.lo_f64() >= x - eps && self.hi_f64() <= x + eps
    }

    pub fn overlaps(&self, other: &BoundedValue) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn add(&self, other: &BoundedValue) -> BoundedValue {
        BoundedValue {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    /// Smallest enclosure containing both.
    pub fn hull(&self, other: &BoundedValue) -> BoundedValue {
        BoundedValue {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    pub fn widen(&self, by: &ExactRational) -> BoundedValue {
        BoundedValue {
            lo: &self.lo - by,
            hi: &self.hi + by,
        }
    }
}

impl fmt::Display for BoundedValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:.12} ± {:.3e}",
            self.mid_f64(),
            self.width_f64() / 2.0
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rational::rat;

    #[test]
    fn basic_interval_operations() {
        let a = BoundedValue::new(rat(1, 3), rat(1, 2)).unwrap();
        let b = BoundedValue::spanning(rat(2, 3), rat(1, 4));
        assert!(a.overlaps(&b));
        assert_eq!(a.width(), rat(1, 6));
        assert_eq!(a.add(&b), BoundedValue::new(rat(7, 12), rat(7, 6)).unwrap());
        assert!(a.contains(&rat(2, 5)));
        assert!(!a.contains(&rat(3, 5)));
        assert!(BoundedValue::new(rat(1, 2), rat(1, 3)).is_err());
        assert_eq!(a.hull(&b).hi(), &rat(2, 3));
    }
}
