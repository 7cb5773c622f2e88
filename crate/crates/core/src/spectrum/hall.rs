//! Hall's ray: a number with prescribed Lagrange value `l >= 6`.
//!
//! Write `l = c0 + x` with `x` in `C(4) + C(4) = [sqrt2 - 1, 4(sqrt2 - 1)]`,
//! split `x = [0; a_1, a_2, ...] + [0; b_1, b_2, ...]` with letters at most 4,
//! and concatenate the blocks `(b_n, ..., b_1, c0, a_1, ..., a_n)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::biseq::BiSequence;
use crate::cantor::{sumset_stab_until, StabOutcome, WordAlphabet, STAB_BUDGET};
use crate::cf::{CfExpansion, Tail};
use crate::error::{Error, Result};
use crate::numeric::rational::{self, int};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HallRay {
    pub c0: u64,
    pub a: Vec<u64>,
    pub b: Vec<u64>,
    /// `[0; block_1, ..., block_n]` as a prefix.
    pub expansion: CfExpansion,
    /// The sequence continued by repeating the last block; its Lagrange value
    /// is within `2^-(n-1)` of `l`.
    pub completion: BiSequence,
}

impl HallRay {
    pub fn block(&self, k: usize) -> Vec<u64> {
        let mut out: Vec<u64> = self.b[..k].iter().rev().copied().collect();
        out.push(self.c0);
        out.extend_from_slice(&self.a[..k]);
        out
    }

    pub fn depth(&self) -> usize {
        self.a.len().min(self.b.len())
    }
}

/// `sqrt2 - 1 <= x <= 4 (sqrt2 - 1)`, exactly.
pub fn in_hall_interval(x: &BigRational) -> bool {
    let one = int(1);
    let four = int(4);
    let lo_ok = x > &-one.clone() && (x + &one) * (x + &one) >= int(2);
    let hi_ok = (x + &four) * (x + &four) <= int(32);
    lo_ok && hi_ok
}

/// Largest `c0` in `5..=floor(l)` with `l - c0` in the Hall interval.
pub fn hall_c0(ell: &BigRational) -> Result<u64> {
    if ell < &int(6) {
        return Err(Error::InvalidInput(format!(
            "Hall's construction needs l >= 6, got {}",
            rational::format_rational(ell)
        )));
    }
    let top = rational::floor(ell)
        .to_u64()
        .ok_or_else(|| Error::InvalidInput("l too large".into()))?;
    (5..=top)
        .rev()
        .find(|&c| in_hall_interval(&(ell - int(c as i64))))
        .ok_or_else(|| Error::InvalidInput("no admissible c0".into()))
}

pub fn hall_ray_alpha(ell: &BigRational, depth: usize) -> Result<HallRay> {
    if depth == 0 {
        return Err(Error::InvalidInput("depth must be at least 1".into()));
    }
    let c0 = hall_c0(ell)?;
    let x = ell - int(c0 as i64);
    let c4 = WordAlphabet::letters_up_to(4);
    let out = sumset_stab_until(&x, &c4, &c4, STAB_BUDGET, &|w1, w2| {
        w1.len() >= depth && w2.len() >= depth
    })?;
    let w = match out {
        StabOutcome::Found(w) => w,
        StabOutcome::NotFound { .. } => {
            return Err(Error::InvalidInput(format!(
                "{} not split as a sum of two C(4) numbers",
                rational::format_rational(&x)
            )))
        }
    };
    let a = w.beta.word[..depth].to_vec();
    let b = w.beta_prime.word[..depth].to_vec();
    let mut ray = HallRay {
        c0,
        a,
        b,
        expansion: CfExpansion::from_i64(0, &[1], Tail::Terminating)?,
        completion: BiSequence::periodic(&[1])?,
    };
    let digits: Vec<BigInt> = (1..=depth)
        .flat_map(|k| ray.block(k))
        .map(BigInt::from)
        .collect();
    ray.expansion = CfExpansion::new(BigInt::from(0), digits, Tail::Prefix)?;
    ray.completion = BiSequence::periodic(&ray.block(depth))?;
    Ok(ray)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rational::parse_rational;
    use crate::spectrum::lagrange_value;

    #[test]
    fn c0_choice() {
        assert_eq!(hall_c0(&int(6)).unwrap(), 5);
        assert_eq!(hall_c0(&parse_rational("7.2").unwrap()).unwrap(), 6);
        assert_eq!(hall_c0(&parse_rational("6.5").unwrap()).unwrap(), 6);
        assert!(hall_c0(&parse_rational("5.9").unwrap()).is_err());
    }

    #[test]
    fn lagrange_value_reproduces_l() {
        for s in ["6", "6.5", "7.2", "9.99"] {
            let ell = parse_rational(s).unwrap();
            let ray = hall_ray_alpha(&ell, 25).unwrap();
            assert_eq!(ray.block(2).len(), 5);
            let v = lagrange_value(&ray.completion, &rational::rat(1, 1 << 30)).unwrap();
            let err = rational::to_f64(&(v.value.mid() - &ell)).abs();
            assert!(err < 1e-6, "{s}: {err}");
        }
    }
}
