//! Certified `sup { m(theta) : theta in Sigma(B) }` by best-first branch and bound.
//!
//! A state fixes the letter at position 0 (a letter of some word of `B`), the
//! rest of that word, and finitely many whole words on each side. Whatever
//! follows on either side has continued-fraction tail in
//! `[min letter, max letter + 1]`, and `[a; d_1, ..., d_k, y]` is monotone in
//! `y`, so each state carries an exact interval for `f`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::cantor::WordAlphabet;
use crate::error::{Error, Result};
use crate::numeric::BoundedValue;

/// Default cap on expanded states.
pub const SHIFT_SUP_BUDGET: usize = 2_000_000;

/// `[d_0; d_1, ..., d_k, y]` as the matrix `(p, p', q, q')` with value `(p y + p') / (q y + q')`.
#[derive(Clone, Debug)]
struct Side {
    p: BigInt,
    pp: BigInt,
    q: BigInt,
    qp: BigInt,
    len: usize,
}

impl Side {
    /// Starts `[d_0; ...]` with the given integer part.
    fn new(d0: u64) -> Self {
        // the identity matrix followed by d0
        let mut s = Side {
            p: BigInt::one(),
            pp: BigInt::zero(),
            q: BigInt::zero(),
            qp: BigInt::one(),
            len: 0,
        };
        s.push(d0);
        s.len = 0;
        s
    }

    fn push(&mut self, a: u64) {
        let a = BigInt::from(a);
        let np = &a * &self.p + &self.pp;
        let nq = &a * &self.q + &self.qp;
        self.pp = std::mem::replace(&mut self.p, np);
        self.qp = std::mem::replace(&mut self.q, nq);
        self.len += 1;
    }

    fn at(&self, y: &BigRational) -> BigRational {
        let num = y * BigRational::from_integer(self.p.clone()) + BigRational::from_integer(self.pp.clone());
        let den = y * BigRational::from_integer(self.q.clone()) + BigRational::from_integer(self.qp.clone());
        num / den
    }

    fn range(&self, ymin: &BigRational, ymax: &BigRational) -> (BigRational, BigRational) {
        let (a, b) = (self.at(ymin), self.at(ymax));
        if a <= b {
            (a, b)
        } else {
            (b, a)
        }
    }
}

#[derive(Clone, Debug)]
struct State {
    right: Side,
    left: Side,
    lo: BigRational,
    hi: BigRational,
    seq: u64,
}

impl PartialEq for State {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for State {}

impl PartialOrd for State {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for State {
    fn cmp(&self, other: &Self) -> Ordering {
        // max-heap on hi; earlier states first among ties
        self.hi.cmp(&other.hi).then(other.seq.cmp(&self.seq))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftSupremum {
    pub value: BoundedValue,
    /// States taken off the queue.
    pub nodes: usize,
}

/// Enclosure of `sup m` over `Sigma(B)` with width at most `tol`.
pub fn sup_markov_over_shift(b: &WordAlphabet, tol: &BigRational) -> Result<BoundedValue> {
    Ok(sup_markov_over_shift_budget(b, tol, SHIFT_SUP_BUDGET)?.value)
}

pub fn sup_markov_over_shift_budget(
    b: &WordAlphabet,
    tol: &BigRational,
    budget: usize,
) -> Result<ShiftSupremum> {
    if !tol.is_positive() {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    let ymin = BigRational::from_integer(BigInt::from(b.min_letter()));
    let ymax = BigRational::from_integer(BigInt::from(b.max_letter() + 1));
    let mut seq = 0u64;
    let mut make = |right: Side, left: Side| {
        let (r0, r1) = right.range(&ymin, &ymax);
        let (l0, l1) = left.range(&ymin, &ymax);
        seq += 1;
        State {
            lo: r0 + l0,
            hi: r1 + l1,
            right,
            left,
            seq,
        }
    };
    let mut heap = BinaryHeap::new();
    let mut best_lo: Option<BigRational> = None;
    for w in b.words() {
        for j in 0..w.len() {
            let mut right = Side::new(w[j]);
            for &a in &w[j + 1..] {
                right.push(a);
            }
            let mut left = Side::new(0);
            for &a in w[..j].iter().rev() {
                left.push(a);
            }
            let s = make(right, left);
            if best_lo.as_ref().is_none_or(|l| &s.lo > l) {
                best_lo = Some(s.lo.clone());
            }
            heap.push(s);
        }
    }
    let mut nodes = 0usize;
    while let Some(s) = heap.pop() {
        nodes += 1;
        let lo = best_lo.clone().expect("nonempty alphabet");
        if &s.hi - &lo <= *tol {
            return Ok(ShiftSupremum {
                value: BoundedValue::new(lo.clone().min(s.hi.clone()), s.hi)?,
                nodes,
            });
        }
        if s.hi < lo {
            continue;
        }
        if nodes > budget {
            return Err(Error::BudgetExhausted(format!(
                "shift supremum expanded {budget} states"
            )));
        }
        let grow_right = s.right.len <= s.left.len;
        for w in b.words() {
            let (mut right, mut left) = (s.right.clone(), s.left.clone());
            if grow_right {
                for &a in w {
                    right.push(a);
                }
            } else {
                for &a in w.iter().rev() {
                    left.push(a);
                }
            }
            let c = make(right, left);
            if &c.lo > best_lo.as_ref().expect("set") {
                best_lo = Some(c.lo.clone());
            }
            if &c.hi >= best_lo.as_ref().expect("set") {
                heap.push(c);
            }
        }
    }
    Err(Error::InvalidInput("empty search space".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rational::rat;
    use crate::numeric::Quad;

    fn q(s: &str) -> Quad {
        s.parse().unwrap()
    }

    #[test]
    fn single_letter_gives_sqrt5() {
        let b: WordAlphabet = "1".parse().unwrap();
        let v = sup_markov_over_shift(&b, &rat(1, 1_000_000_000)).unwrap();
        assert!(v.contains_quad(&q("sqrt(5)")), "{v}");
    }

    #[test]
    fn ones_and_twos_give_sqrt12() {
        let b = WordAlphabet::letters_up_to(2);
        let v = sup_markov_over_shift(&b, &rat(1, 100_000_000)).unwrap();
        assert!(v.contains_quad(&q("sqrt(12)")), "{v}");
        assert!(v.width() <= rat(1, 100_000_000));
    }

    #[test]
    fn bm_words_stay_below_three_and_a_half() {
        let b: WordAlphabet = "2.1.1.2,2.1.1.1.1.2".parse().unwrap();
        let v = sup_markov_over_shift(&b, &rat(1, 1_000_000)).unwrap();
        assert!(v.hi() <= &rat(7, 2), "{v}");
        assert!(v.lo() > &rat(3, 1));
    }
}
