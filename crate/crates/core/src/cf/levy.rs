//! Monte Carlo check of Levy's constant.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `exp(pi^2 / (12 ln 2))`.
pub const LEVY_CONSTANT: f64 = 3.275_822_918_721_811;

/// Inverse-CDF sample from the Gauss-Kuzmin law `P(k) = log2(1 + 1/(k(k+2)))`.
///
/// `P(a > k) = log2(1 + 1/(k+1))`, so for uniform `u` the quotient is the least
/// `k >= 1` with `log2(1 + 1/(k+1)) < u`, i.e. `floor(1/(2^u - 1))`.
pub fn gauss_kuzmin_quotient(u: f64) -> u64 {
    let c = 1.0 / (u.exp2() - 1.0);
    if !c.is_finite() || c >= u64::MAX as f64 {
        return u64::MAX / 4;
    }
    (c.floor() as u64).max(1)
}

fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    let shift = bits.saturating_sub(64);
    let top = (x >> shift).to_f64().expect("64-bit value");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `q_n^{1/n}` for one random expansion.
pub fn sample_qn_root(rng: &mut impl Rng, n: usize) -> f64 {
    let mut prev = BigUint::zero();
    let mut cur = BigUint::one();
    for _ in 0..n {
        let u: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
        let a = gauss_kuzmin_quotient(u);
        let next = &cur * a + &prev;
        prev = cur;
        cur = next;
    }
    (ln_big(&cur) / n as f64).exp()
}

/// Mean of `q_n^{1/n}` over `samples` seeded random expansions.
pub fn levy_mean(n: usize, samples: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let total: f64 = (0..samples).map(|_| sample_qn_root(&mut rng, n)).sum();
    total / samples as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampler_matches_gauss_kuzmin_masses() {
        // P(a = 1) = log2(4/3)
        let p1 = (4.0f64 / 3.0).log2();
        let n = 200_000;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let ones = (0..n)
            .filter(|_| gauss_kuzmin_quotient(rng.gen_range(f64::MIN_POSITIVE..1.0)) == 1)
            .count();
        assert!((ones as f64 / n as f64 - p1).abs() < 0.005);
        assert_eq!(gauss_kuzmin_quotient(0.9), 1);
        assert_eq!(gauss_kuzmin_quotient(0.5), 2);
    }

    #[test]
    fn levy_constant_value() {
        let expected = (std::f64::consts::PI.powi(2) / (12.0 * std::f64::consts::LN_2)).exp();
        assert!((LEVY_CONSTANT - expected).abs() < 1e-12);
    }
}
