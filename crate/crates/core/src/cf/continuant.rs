use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Default word-length cap for [`euler_rule_oracle`].
pub const EULER_CAP: usize = 20;

/// `q(a_1, ..., a_n)`, the denominator of `[0; a_1, ..., a_n]`; `q() = 1`.
pub fn continuant(word: &[u64]) -> BigInt {
    continuant_pair(word).0
}

/// `(q(a_1..a_n), q(a_1..a_{n-1}))`.
pub fn continuant_pair(word: &[u64]) -> (BigInt, BigInt) {
    let mut prev = BigInt::zero();
    let mut cur = BigInt::one();
    for &a in word {
        let next = BigInt::from(a) * &cur + &prev;
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

/// Same recursion in `u128`; `None` on overflow.
pub fn continuant_pair_u128(word: &[u64]) -> Option<(u128, u128)> {
    let mut prev: u128 = 0;
    let mut cur: u128 = 1;
    for &a in word {
        let next = (a as u128).checked_mul(cur)?.checked_add(prev)?;
        prev = cur;
        cur = next;
    }
    Some((cur, prev))
}

/// Continuant by Euler's rule: sum over all ways of deleting disjoint
/// adjacent pairs of the product of the remaining letters.
pub fn euler_rule_oracle(word: &[u64]) -> Result<BigInt> {
    euler_rule_oracle_capped(word, EULER_CAP)
}

pub fn euler_rule_oracle_capped(word: &[u64], cap: usize) -> Result<BigInt> {
    let n = word.len();
    if n > cap {
        return Err(Error::CapExceeded { len: n, cap });
    }
    if n < 2 {
        return Ok(word.iter().map(|&a| BigInt::from(a)).product());
    }
    // Bit i set: the pair (i, i+1) is deleted.
    let mut total = BigInt::zero();
    for mask in 0u32..(1u32 << (n - 1)) {
        if mask & (mask >> 1) != 0 {
            continue;
        }
        let mut removed = 0u32;
        for i in 0..n - 1 {
            if mask & (1 << i) != 0 {
                removed |= 0b11 << i;
            }
        }
        let mut prod = BigInt::one();
        for (i, &a) in word.iter().enumerate() {
            if removed & (1 << i) == 0 {
                prod *= a;
            }
        }
        total += prod;
    }
    Ok(total)
}

/// `[0; a_1, ..., a_n]` exactly.
pub fn word_value(word: &[u64]) -> BigRational {
    let (q, _) = continuant_pair(word);
    // numerator of [0; a_1..a_n] is q(a_2..a_n)
    let p = if word.is_empty() {
        BigInt::zero()
    } else {
        continuant(&word[1..])
    };
    BigRational::new(p, q)
}

/// `[0; a_n, ..., a_1]`, the value of the reversed word.
pub fn transpose_value(word: &[u64]) -> BigRational {
    let rev: Vec<u64> = word.iter().rev().copied().collect();
    word_value(&rev)
}
