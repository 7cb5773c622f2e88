//! Best approximations and Hurwitz's theorem.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::expansion::CfExpansion;
use crate::error::{Error, Result};
use crate::numeric::rational::int;
use crate::numeric::{BoundedValue, Quad};

/// What is known about `alpha`: its exact value or a certified enclosure.
#[derive(Clone, Debug)]
pub enum Known {
    Exact(Quad),
    Enclosed(BoundedValue),
}

impl Known {
    pub fn of(cf: &CfExpansion) -> Known {
        match cf.value() {
            Some(v) => Known::Exact(v),
            None => Known::Enclosed(cf.best_enclosure(0)),
        }
    }

    /// Bounds on `|q * alpha - p|`: exact when possible.
    fn abs_residual(&self, p: &BigInt, q: &BigInt) -> Residual {
        let pr = BigRational::from_integer(p.clone());
        let qr = BigRational::from_integer(q.clone());
        match self {
            Known::Exact(a) => Residual::Exact(a.scale(&qr).add_rational(&-pr).abs()),
            Known::Enclosed(e) => {
                let lo = e.lo() * &qr - &pr;
                let hi = e.hi() * &qr - &pr;
                let (lo, hi) = if lo.is_negative() && hi.is_positive() {
                    (BigRational::zero(), lo.abs().max(hi))
                } else {
                    let (a, b) = (lo.abs(), hi.abs());
                    if a <= b {
                        (a, b)
                    } else {
                        (b, a)
                    }
                };
                Residual::Range(lo, hi)
            }
        }
    }
}

enum Residual {
    Exact(Quad),
    Range(BigRational, BigRational),
}

/// Decides `c * r^2 < 1` for the residual `r`. `None` when undecided.
fn scaled_square_below_one(res: &Residual, c: &BigRational) -> Option<bool> {
    match res {
        Residual::Exact(r) => {
            let v = (r * r).scale(c);
            Some(v.cmp_rational(&BigRational::one()) == Ordering::Less)
        }
        Residual::Range(lo, hi) => {
            if hi * hi * c < BigRational::one() {
                Some(true)
            } else if lo * lo * c >= BigRational::one() {
                Some(false)
            } else {
                None
            }
        }
    }
}

/// All `p/q` with `q <= Q` and `|alpha - p/q| < 1/(2 q^2)`.
///
/// By the classical criterion these are convergents, so only convergents are
/// tested: `|alpha - p_n/q_n| < 1/(2 q_n^2)` iff `4 q_n^2 (q_n alpha - p_n)^2 < 1`.
pub fn best_approximations(cf: &CfExpansion, bound: &BigInt) -> Result<Vec<BigRational>> {
    if !bound.is_positive() {
        return Err(Error::InvalidInput("bound Q must be positive".into()));
    }
    let known = Known::of(cf);
    let mut out = Vec::new();
    let mut passed_bound = false;
    for cp in cf.convergents() {
        if &cp.q > bound {
            passed_bound = true;
            break;
        }
        let res = known.abs_residual(&cp.p, &cp.q);
        let c = BigRational::from_integer(BigInt::from(4) * &cp.q * &cp.q);
        match scaled_square_below_one(&res, &c) {
            Some(true) => out.push(cp.value()),
            Some(false) => {}
            None => {
                return Err(Error::Undecided(format!(
                    "convergent {}/{} needs more partial quotients",
                    cp.p, cp.q
                )))
            }
        }
    }
    if !passed_bound && cf.is_prefix() {
        return Err(Error::Undecided(format!(
            "expansion ends before a convergent with denominator above {bound}"
        )));
    }
    Ok(out)
}

/// An index `k` in `{n-1, n, n+1}` with `|alpha - p_k/q_k| < 1/(sqrt(5) q_k^2)`.
pub fn hurwitz_witness(cf: &CfExpansion, n: usize) -> Result<usize> {
    if n < 1 {
        return Err(Error::InvalidInput("Hurwitz witness needs n >= 1".into()));
    }
    if let Some(len) = cf.known_len() {
        let needed = if cf.is_prefix() { n + 2 } else { n + 1 };
        if len < needed {
            return Err(Error::IndexOutOfRange {
                index: needed as i64,
                available: len,
            });
        }
    }
    let known = Known::of(cf);
    let mut undecided = false;
    let mut cp = cf.convergent(n as i64 - 2)?;
    for k in n - 1..=n + 1 {
        let Some(a) = cf.quotient(k) else { break };
        cp = cp.next(&a);
        let res = known.abs_residual(&cp.p, &cp.q);
        let c = BigRational::from_integer(BigInt::from(5) * &cp.q * &cp.q);
        match scaled_square_below_one(&res, &c) {
            Some(true) => return Ok(k),
            Some(false) => {}
            None => undecided = true,
        }
    }
    if undecided {
        Err(Error::Undecided(format!(
            "Hurwitz test around index {n} needs a deeper expansion"
        )))
    } else {
        Err(Error::InvalidInput(format!(
            "no Hurwitz witness among convergents {}..={}",
            n - 1,
            n + 1
        )))
    }
}

/// Number of reduced `p/q`, `1 <= q <= Q`, with `|phi - p/q| <= 1/((sqrt(5) + eps) q^2)`.
///
/// The right side is below `1/(2q^2)`, so only `p = round(q phi)` can qualify.
/// The test `q |q phi - p| (sqrt(5) + eps) <= 1` is decided exactly in `Q(sqrt(5))`.
pub fn hurwitz_counterexample_count(eps: &BigRational, bound: u64) -> Result<u64> {
    if !eps.is_positive() {
        return Err(Error::InvalidInput("epsilon must be positive".into()));
    }
    let phi: Quad = "(1+sqrt(5))/2".parse().expect("valid surd");
    let factor = Quad::sqrt_of(5)?.add_rational(eps);
    let mut count = 0;
    for q in 1..=bound {
        let qb = BigInt::from(q);
        let qr = BigRational::from_integer(qb.clone());
        let p = phi.scale(&qr).round();
        if !p.gcd(&qb).is_one() {
            continue;
        }
        let r = phi
            .scale(&qr)
            .add_rational(&-BigRational::from_integer(p))
            .abs();
        let lhs = (&r * &factor).scale(&qr);
        if lhs.cmp_rational(&int(1)) != Ordering::Greater {
            count += 1;
        }
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cf::expansion::{cf_expand, pi_prefix};
    use crate::numeric::rational::rat;

    #[test]
    fn golden_ratio_best_approximations() {
        let phi = cf_expand(&"(1+sqrt(5))/2".parse().unwrap(), 10).unwrap();
        let got = best_approximations(&phi, &BigInt::from(8)).unwrap();
        assert_eq!(got, vec![rat(2, 1), rat(3, 2), rat(5, 3), rat(8, 5), rat(13, 8)]);
    }

    #[test]
    fn pi_best_approximations() {
        let pi = pi_prefix(4);
        let got = best_approximations(&pi, &BigInt::from(200)).unwrap();
        assert!(got.contains(&rat(22, 7)));
        assert!(got.contains(&rat(355, 113)));
        assert!(!got.contains(&rat(333, 106)));
        // 355/113 is the last convergent with q <= 200, so [3;7,15,1] alone is too short
        assert!(best_approximations(&pi_prefix(3), &BigInt::from(200)).is_err());
    }

    #[test]
    fn hurwitz_examples() {
        let pi = pi_prefix(12);
        let k = hurwitz_witness(&pi, 1).unwrap();
        assert!(k <= 2);
        let s = cf_expand(&"sqrt(2)-1".parse().unwrap(), 10).unwrap();
        let k = hurwitz_witness(&s, 3).unwrap();
        assert!((2..=4).contains(&k));
    }

    #[test]
    fn counterexamples_plateau() {
        let a = hurwitz_counterexample_count(&rat(1, 1), 100).unwrap();
        let b = hurwitz_counterexample_count(&rat(1, 1), 2000).unwrap();
        assert_eq!(a, b);
        let c = hurwitz_counterexample_count(&rat(1, 1000), 100).unwrap();
        assert!(c >= a);
        assert_eq!(hurwitz_counterexample_count(&rat(1000, 1), 100).unwrap(), 0);
    }
}
