//! Exact `floor(e^k)` and `floor(ln n)` for integers.

use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::rational;

/// Certified `floor(e^k)`.
///
/// Partial sums of the exponential series bound `e^k` from below and a
/// geometric tail bound from above; terms are added until both floors agree.
fn compute_exp_floor(k: u32) -> BigInt {
    let kk = BigRational::from_integer(BigInt::from(k));
    let mut sum = BigRational::zero();
    let mut term = BigRational::one();
    let mut j: u32 = 0;
    loop {
        sum += &term;
        j += 1;
        term = &term * &kk / BigRational::from_integer(BigInt::from(j));
        // Remaining tail is term * (1 + k/(j+1) + ...) <= term / (1 - k/(j+1)).
        if j > 2 * k + 2 {
            let ratio = BigRational::new(BigInt::from(k), BigInt::from(j + 1));
            let tail = &term / (BigRational::one() - ratio);
            let lo = rational::floor(&sum);
            let hi = rational::floor(&(&sum + &tail));
            if lo == hi {
                return lo;
            }
        }
    }
}

fn table() -> &'static Mutex<Vec<BigInt>> {
    static TABLE: OnceLock<Mutex<Vec<BigInt>>> = OnceLock::new();
    TABLE.get_or_init(|| Mutex::new(Vec::new()))
}

pub fn exp_floor(k: u32) -> BigInt {
    let mut t = table().lock().expect("exp table poisoned");
    while t.len() <= k as usize {
        let next = compute_exp_floor(t.len() as u32);
        t.push(next);
    }
    t[k as usize].clone()
}

/// `floor(ln n)` for `n >= 1`, exact. Uses `e^k < n <=> floor(e^k) < n`
/// for integers `n` since `e^k` is irrational when `k >= 1`.
pub fn floor_ln(n: &BigInt) -> u32 {
    let mut k = 0u32;
    while exp_floor(k + 1) < *n {
        k += 1;
    }
    k
}

/// `floor(e^k)` for `k = 0..=87` as `u128`, for hot loops.
pub fn exp_floor_u128_table() -> &'static [u128] {
    static FAST: OnceLock<Vec<u128>> = OnceLock::new();
    FAST.get_or_init(|| {
        (0..=87)
            .map(|k| exp_floor(k).to_u128().expect("fits in u128"))
            .collect()
    })
}

/// `floor(ln n)` for `n >= 1` using the `u128` table.
pub fn floor_ln_u128(n: u128) -> u32 {
    let t = exp_floor_u128_table();
    // number of k >= 1 with floor(e^k) < n
    t[1..].partition_point(|&e| e < n) as u32
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_float_exponentials() {
        for k in 0..40u32 {
            let expected = (k as f64).exp().floor();
            let got = exp_floor(k).to_f64().unwrap();
            // f64 is exact enough to check leading digits
            assert!((got - expected).abs() <= expected * 1e-14, "k={k}");
        }
        assert_eq!(exp_floor(0), BigInt::from(1));
        assert_eq!(exp_floor(1), BigInt::from(2));
        assert_eq!(exp_floor(2), BigInt::from(7));
        assert_eq!(exp_floor(10), BigInt::from(22026));
    }

    #[test]
    fn floor_ln_small_values() {
        assert_eq!(floor_ln(&BigInt::from(1)), 0);
        assert_eq!(floor_ln(&BigInt::from(2)), 0);
        assert_eq!(floor_ln(&BigInt::from(3)), 1);
        assert_eq!(floor_ln(&BigInt::from(15)), 2);
        assert_eq!(floor_ln(&BigInt::from(20)), 2);
        assert_eq!(floor_ln(&BigInt::from(21)), 3);
        for n in 1u128..5000 {
            assert_eq!(floor_ln_u128(n), floor_ln(&BigInt::from(n)), "n={n}");
            assert_eq!(floor_ln_u128(n), (n as f64).ln().floor() as u32);
        }
    }
}
