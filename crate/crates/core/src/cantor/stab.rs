//! Locating a rational `x` in the sum set `K(B) + K(B')` by cylinder refinement.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use super::alphabet::WordAlphabet;
use super::cylinder::{cylinder, word_matrix, CylinderInterval};
use super::dimension::hull;
use crate::error::{Error, Result};
use crate::numeric::rational::round_dyadic;

/// Default cap on explored cylinder pairs.
pub const STAB_BUDGET: usize = 2_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabWitness {
    pub beta: CylinderInterval,
    pub beta_prime: CylinderInterval,
    /// Cylinder pairs explored.
    pub nodes: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StabOutcome {
    Found(StabWitness),
    /// Every cylinder pair was excluded: `x` is not in the sum of the covers.
    NotFound { nodes: usize },
}

impl StabOutcome {
    pub fn witness(&self) -> Option<&StabWitness> {
        match self {
            StabOutcome::Found(w) => Some(w),
            StabOutcome::NotFound { .. } => None,
        }
    }
}

/// Rational interval containing the hull of `K(B)`, widened by about `1e-9`.
fn outer_hull(b: &WordAlphabet) -> (BigRational, BigRational) {
    let (lo, hi) = hull(b);
    (round_dyadic(lo - 1e-9, 40, true), round_dyadic(hi + 1e-9, 40, false))
}

/// `psi_w(H)`: where `[0; w, t]` can lie for `t` in `[h_lo, h_hi]`.
fn image(word: &[u64], h: &(BigRational, BigRational)) -> (BigRational, BigRational) {
    let (p, pp, q, qp) = word_matrix(word);
    let at = |t: &BigRational| {
        (BigRational::from_integer(p.clone()) + t * BigRational::from_integer(pp.clone()))
            / (BigRational::from_integer(q.clone()) + t * BigRational::from_integer(qp.clone()))
    };
    let (a, b) = (at(&h.0), at(&h.1));
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

fn cyl_len_key(word: &[u64]) -> BigInt {
    // 1/len = q (q + q'); larger means shorter
    let (_, _, q, qp) = word_matrix(word);
    &q * (&q + &qp)
}

/// Depth-first search for words `beta`, `beta'` (concatenations of words of
/// `B`, `B'`) whose images of the hulls sum to an interval containing `x`,
/// refining the longer cylinder (ties: the first) until `accept` holds.
pub fn sumset_stab_until(
    x: &BigRational,
    b: &WordAlphabet,
    b2: &WordAlphabet,
    budget: usize,
    accept: &dyn Fn(&[u64], &[u64]) -> bool,
) -> Result<StabOutcome> {
    let h1 = outer_hull(b);
    let h2 = outer_hull(b2);
    let mut stack: Vec<(Vec<u64>, Vec<u64>)> = vec![(Vec::new(), Vec::new())];
    let mut nodes = 0usize;
    while let Some((w1, w2)) = stack.pop() {
        nodes += 1;
        if nodes > budget {
            return Err(Error::BudgetExhausted(format!(
                "sum-set search explored {budget} cylinder pairs"
            )));
        }
        let i1 = if w1.is_empty() { h1.clone() } else { image(&w1, &h1) };
        let i2 = if w2.is_empty() { h2.clone() } else { image(&w2, &h2) };
        if x < &(&i1.0 + &i2.0) || x > &(&i1.1 + &i2.1) {
            continue;
        }
        if !w1.is_empty() && !w2.is_empty() && accept(&w1, &w2) {
            let c1 = cylinder(&w1)?;
            let c2 = cylinder(&w2)?;
            return Ok(StabOutcome::Found(StabWitness {
                beta: c1,
                beta_prime: c2,
                nodes,
            }));
        }
        let refine_first = w1.is_empty()
            || (!w2.is_empty() && cyl_len_key(&w1) <= cyl_len_key(&w2));
        // push in reverse so the first word of the alphabet is explored first
        if refine_first {
            for w in b.words().iter().rev() {
                let mut n = w1.clone();
                n.extend_from_slice(w);
                stack.push((n, w2.clone()));
            }
        } else {
            for w in b2.words().iter().rev() {
                let mut n = w2.clone();
                n.extend_from_slice(w);
                stack.push((w1.clone(), n));
            }
        }
    }
    Ok(StabOutcome::NotFound { nodes })
}

/// Finds `beta`, `beta'` with `x` in `I(beta) + I(beta')` and both cylinder
/// lengths below `tol`, or certifies that no pair of cylinders survives.
pub fn sumset_stab(
    x: &BigRational,
    b: &WordAlphabet,
    b2: &WordAlphabet,
    tol: &BigRational,
) -> Result<StabOutcome> {
    sumset_stab_budget(x, b, b2, tol, STAB_BUDGET)
}

pub fn sumset_stab_budget(
    x: &BigRational,
    b: &WordAlphabet,
    b2: &WordAlphabet,
    tol: &BigRational,
    budget: usize,
) -> Result<StabOutcome> {
    if !tol.is_positive() {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    let short = |w: &[u64]| {
        let key = BigRational::from_integer(cyl_len_key(w));
        key * tol > BigRational::from_integer(BigInt::from(1))
    };
    sumset_stab_until(x, b, b2, budget, &|w1, w2| short(w1) && short(w2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rational::{parse_rational, rat};

    fn c4() -> WordAlphabet {
        WordAlphabet::letters_up_to(4)
    }

    #[test]
    fn one_is_in_the_sum_set() {
        let tol = rat(1, 1_000_000_000_000);
        let out = sumset_stab(&rat(1, 1), &c4(), &c4(), &tol).unwrap();
        let w = out.witness().expect("found");
        assert!(w.beta.length() < tol && w.beta_prime.length() < tol);
        let lo = &w.beta.lo + &w.beta_prime.lo;
        let hi = &w.beta.hi + &w.beta_prime.hi;
        assert!(lo <= rat(1, 1) && rat(1, 1) <= hi);
    }

    #[test]
    fn points_outside_are_rejected() {
        let tol = rat(1, 1_000_000_000);
        for x in ["0.3", "1.7", "0.41", "1.66"] {
            let out = sumset_stab(&parse_rational(x).unwrap(), &c4(), &c4(), &tol).unwrap();
            assert!(matches!(out, StabOutcome::NotFound { .. }), "{x}");
        }
        let out = sumset_stab(&parse_rational("0.83").unwrap(), &c4(), &c4(), &tol).unwrap();
        assert!(out.witness().is_some());
    }
}
