//! The alphabets `B_m = {2 1^(2m) 2, 2 1^(2m+2) 2}` and the lower bound
//! `d(3 + 2^-m) >= 2 HD(K(B_m)) > 0`.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::cantor::{dimension_bracket, DimensionBracket, WordAlphabet};
use crate::error::{Error, Result};
use crate::numeric::BoundedValue;
use crate::spectrum::sup_markov_over_shift;

pub fn bm_alphabet(m: u32) -> Result<WordAlphabet> {
    if m == 0 {
        return Err(Error::InvalidInput("m must be at least 1".into()));
    }
    let word = |ones: usize| {
        let mut w = vec![2u64];
        w.extend(std::iter::repeat_n(1, ones));
        w.push(2);
        w
    };
    WordAlphabet::new(vec![word(2 * m as usize), word(2 * m as usize + 2)])
}

#[derive(Clone, Debug, PartialEq)]
pub struct BmBound {
    pub m: u32,
    /// `3 + 2^-m`
    pub t: BigRational,
    /// Enclosure of `sup m` over `Sigma(B_m)`.
    pub sup: BoundedValue,
    /// `sup.hi <= t`, exactly.
    pub certified: bool,
    pub bracket: DimensionBracket,
    /// `min(1, 2 bracket.lower)`, a lower bound for `d(t)` when certified.
    pub d_lower: f64,
}

/// Depth of the dimension bracket used for `K(B_m)`.
pub const BM_DEPTH: usize = 12;

pub fn bm_lower_bound(m: u32) -> Result<BmBound> {
    let b = bm_alphabet(m)?;
    let t = BigRational::new(BigInt::from((3u64 << m) + 1), BigInt::from(1u64 << m));
    let sup = sup_markov_over_shift(&b, &BigRational::new(BigInt::from(1), BigInt::from(1u64 << 30)))?;
    let certified = sup.hi() <= &t;
    let bracket = dimension_bracket(&b, BM_DEPTH)?;
    let d_lower = if certified { (2.0 * bracket.lower).min(1.0) } else { 0.0 };
    Ok(BmBound {
        m,
        t,
        sup,
        certified,
        bracket,
        d_lower,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn b1_words() {
        let b = bm_alphabet(1).unwrap();
        assert_eq!(b.words(), &[vec![2, 1, 1, 2], vec![2, 1, 1, 1, 1, 2]]);
        assert!(bm_alphabet(0).is_err());
    }

    #[test]
    fn bounds_for_m_1_and_2() {
        for m in [1, 2] {
            let r = bm_lower_bound(m).unwrap();
            assert!(r.certified, "{r:?}");
            assert!(r.bracket.lower > 0.0);
            assert!(r.d_lower > 0.0);
        }
    }
}
