//! Does the cylinder `I+(alpha)` meet `K_t+`, i.e. does `alpha` extend to a
//! bi-infinite sequence with `m <= t`?
//!
//! NO is certified from the minimum of `f` at each position of `alpha` over
//! all extensions with admissible letters. YES is certified by exhibiting an
//! eventually periodic extension whose heights all stay below `t`.
//! Floating point is used only as a filter with a fixed margin far above its
//! rounding error; near-ties are settled in exact surd arithmetic (NO) or
//! reported as MAYBE (YES).

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::cantor::WordAlphabet;
use crate::error::{Error, Result};
use crate::numeric::Quad;
use crate::spectrum::{periodic_orbit_values, sup_markov_over_shift_budget};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Feasibility {
    Yes,
    No,
    Maybe,
}

/// Float comparisons closer than this are not trusted.
const MARGIN: f64 = 1e-9;
/// Default letters examined on each side of a position in the YES test.
pub const YES_DEPTH: usize = 30;

const CANDIDATE_PERIODS: [&[u64]; 6] = [&[1], &[1, 2], &[2, 1], &[1, 1, 2, 2], &[2, 2, 1, 1], &[2]];

/// Everything about `t` the tests need, computed once.
#[derive(Clone, Debug)]
pub struct Threshold {
    t: Quad,
    t_f64: f64,
    /// Largest letter not excluded by `a <= f`.
    letter_bound: u64,
    /// Letters that can occur in any sequence with `m <= t` are at most this.
    max_letter: u64,
    /// Extremal complete quotients `[1; L, 1, L, ...]` and `[L; 1, L, 1, ...]`.
    y_min: Quad,
    y_max: Quad,
    y_min_f64: f64,
    y_max_f64: f64,
    /// Words with letters at most this are certified YES outright.
    safe_letter: u64,
    /// Periods usable as YES extensions, with a float bound on their orbit heights.
    periods: Vec<Vec<u64>>,
}

fn extremal_tails(l: u64) -> (Quad, Quad) {
    let v = |p: [u64; 2]| {
        crate::cf::CfExpansion::from_i64(p[0] as i64, &[p[1] as i64, p[0] as i64], crate::cf::Tail::Periodic { start: 0 })
            .expect("period")
            .value()
            .expect("periodic")
    };
    if l == 1 {
        let phi = v([1, 1]);
        return (phi.clone(), phi);
    }
    (v([1, l]), v([l, 1]))
}

impl Threshold {
    pub fn new(t: &Quad) -> Result<Self> {
        if t.cmp_rational(&BigRational::from_integer(BigInt::from(3))) == Ordering::Less
            || t.cmp_rational(&BigRational::from_integer(BigInt::from(5))) != Ordering::Less
        {
            return Err(Error::InvalidInput(format!("t = {t} outside [3, 5)")));
        }
        let fl = t.floor();
        let fl_u: u64 = fl.try_into().expect("small");
        let mut l = if t.cmp_rational(&BigRational::from_integer(BigInt::from(fl_u))) == Ordering::Equal {
            fl_u - 1
        } else {
            fl_u
        };
        let bound = l;
        let mut th = Self::with_letter(t, l);
        // a letter that is infeasible on its own cannot occur anywhere
        while l > 1 && th.min_height_exceeds(&[l]) {
            l -= 1;
            th = Self::with_letter(t, l);
        }
        th.letter_bound = bound;
        th.finish()
    }

    fn with_letter(t: &Quad, l: u64) -> Self {
        let (y_min, y_max) = extremal_tails(l);
        Threshold {
            t: t.clone(),
            t_f64: t.to_f64(),
            letter_bound: l,
            max_letter: l,
            y_min_f64: y_min.to_f64(),
            y_max_f64: y_max.to_f64(),
            y_min,
            y_max,
            safe_letter: 0,
            periods: Vec::new(),
        }
    }

    fn finish(mut self) -> Result<Self> {
        for k in 1..=self.max_letter {
            if !sup_below(&WordAlphabet::letters_up_to(k), &self.t) {
                break;
            }
            self.safe_letter = k;
        }
        self.periods = CANDIDATE_PERIODS
            .iter()
            .filter(|p| p.iter().all(|&a| a <= self.max_letter))
            .filter(|p| {
                let top = periodic_orbit_values(p)
                    .iter()
                    .map(Quad::to_f64)
                    .fold(f64::NEG_INFINITY, f64::max);
                top < self.t_f64 - 2.0 * MARGIN
            })
            .map(|p| p.to_vec())
            .collect();
        Ok(self)
    }

    pub fn t(&self) -> &Quad {
        &self.t
    }

    /// Largest integer below `t`: bigger letters give `f > t` outright.
    pub fn letter_bound(&self) -> u64 {
        self.letter_bound
    }

    pub fn max_letter(&self) -> u64 {
        self.max_letter
    }

    /// Largest `k` with `sup m` over `{1..k}^Z` certified below `t`.
    pub fn safe_letter(&self) -> u64 {
        self.safe_letter
    }

    /// Exact minimum of `f` at position `i` of `word` over admissible extensions.
    pub fn min_height_exact(&self, word: &[u64], i: usize) -> Quad {
        let tail_min = |digits: Vec<u64>| {
            let a = tail_value(&digits, &self.y_min);
            let b = tail_value(&digits, &self.y_max);
            a.min(b)
        };
        let right = tail_min(word[i + 1..].to_vec());
        let left = tail_min(word[..i].iter().rev().copied().collect());
        (right + left).add_rational(&BigRational::from_integer(BigInt::from(word[i])))
    }

    /// True when some position of `word` has `f > t` for every extension.
    pub fn min_height_exceeds(&self, word: &[u64]) -> bool {
        if word.iter().any(|&a| a > self.max_letter) {
            return true;
        }
        let n = word.len();
        // tail ranges [0; y] for y in [y_min, y_max], padded outward
        let base = (1.0 / self.y_max_f64 - MARGIN * 1e-3, 1.0 / self.y_min_f64 + MARGIN * 1e-3);
        let mut right = vec![base; n];
        for i in (0..n.saturating_sub(1)).rev() {
            let (lo, hi) = right[i + 1];
            let a = word[i + 1] as f64;
            right[i] = (1.0 / (a + hi), 1.0 / (a + lo));
        }
        let mut left = base;
        for i in 0..n {
            if i > 0 {
                let a = word[i - 1] as f64;
                left = (1.0 / (a + left.1), 1.0 / (a + left.0));
            }
            let m = word[i] as f64 + right[i].0 + left.0;
            if m > self.t_f64 + MARGIN {
                return true;
            }
            if m >= self.t_f64 - MARGIN && self.min_height_exact(word, i) > self.t {
                return true;
            }
        }
        false
    }

    /// Upper bound on every height of `(P)* word (Q)*`, in floats.
    fn extension_max_height(&self, word: &[u64], left: &[u64], right: &[u64], depth: usize) -> f64 {
        let n = word.len() as i64;
        let (pl, pr) = (left.len() as i64, right.len() as i64);
        let letter = |j: i64| -> u64 {
            if j < 0 {
                left[(pl - 1 - (-j - 1) % pl) as usize]
            } else if j < n {
                word[j as usize]
            } else {
                right[((j - n) % pr) as usize]
            }
        };
        let top = word
            .iter()
            .chain(left)
            .chain(right)
            .copied()
            .max()
            .unwrap_or(1) as f64;
        let d = depth as i64;
        // Heights at positions lo..hi, each seeing at least `depth` letters on
        // both sides; beyond the scanned range letters are cut off and the
        // tail [0; y] only known to lie in [1/(top+1), 1].
        let (lo, hi) = (-d - pl, n + d + pr);
        let (from, to) = (lo - d, hi + d);
        let len = (to - from) as usize;
        let letters: Vec<f64> = (from..to).map(|j| letter(j) as f64).collect();
        let cut = (1.0 / (top + 1.0), 1.0);
        // right[k]: range of [0; letters[k+1..]]
        let mut right = vec![cut; len];
        for k in (0..len - 1).rev() {
            let (l, h) = right[k + 1];
            let a = letters[k + 1];
            right[k] = (1.0 / (a + h), 1.0 / (a + l));
        }
        let mut best = f64::NEG_INFINITY;
        let mut left = cut;
        for k in 0..len {
            if k > 0 {
                let a = letters[k - 1];
                left = (1.0 / (a + left.1), 1.0 / (a + left.0));
            }
            let j = from + k as i64;
            if (lo..hi).contains(&j) {
                best = best.max(letters[k] + right[k].1 + left.1);
            }
        }
        best
    }

    /// Looks for a periodic extension on each side keeping `m` below `t`.
    pub fn has_yes_witness(&self, word: &[u64], depth: usize) -> bool {
        if word.iter().all(|&a| a <= self.safe_letter) {
            return true;
        }
        if word.iter().any(|&a| a > self.max_letter) {
            return false;
        }
        let limit = self.t_f64 - MARGIN;
        self.periods.iter().any(|p| {
            self.periods
                .iter()
                .any(|q| self.extension_max_height(word, p, q, depth) < limit)
        })
    }

    pub fn classify(&self, word: &[u64], depth: usize) -> Feasibility {
        if self.min_height_exceeds(word) {
            Feasibility::No
        } else if self.has_yes_witness(word, depth) {
            Feasibility::Yes
        } else {
            Feasibility::Maybe
        }
    }
}

/// Certifies `sup m < t` over `Sigma(B)`, refining until decided or the cap.
fn sup_below(b: &WordAlphabet, t: &Quad) -> bool {
    for bits in [10u32, 20, 30, 40] {
        let tol = BigRational::new(BigInt::from(1), BigInt::from(1u64 << bits));
        let Ok(s) = sup_markov_over_shift_budget(b, &tol, 200_000) else {
            return false;
        };
        if Quad::rational(s.value.hi().clone()) < *t {
            return true;
        }
        if Quad::rational(s.value.lo().clone()) >= *t {
            return false;
        }
    }
    false
}

/// `[0; d_1, ..., d_k, y]`.
fn tail_value(digits: &[u64], y: &Quad) -> Quad {
    let mut x = y.clone();
    for &d in digits.iter().rev() {
        x = x.recip().expect("positive").add_rational(&BigRational::from_integer(BigInt::from(d)));
    }
    x.recip().expect("positive")
}

/// Whether `I+(word)` meets `K_t+`.
pub fn feasible_cylinder(word: &[u64], t: &Quad, depth: usize) -> Result<Feasibility> {
    Ok(Threshold::new(t)?.classify(word, depth))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Quad {
        s.parse().unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(feasible_cylinder(&[1, 5, 1], &q("49/10"), 40).unwrap(), Feasibility::No);
        assert_eq!(feasible_cylinder(&[1; 12], &q("3"), 40).unwrap(), Feasibility::Yes);
        assert_eq!(feasible_cylinder(&[3], &q("sqrt(12)"), 40).unwrap(), Feasibility::No);
        assert_eq!(feasible_cylinder(&[1, 2, 2, 1], &q("sqrt(12)"), 40).unwrap(), Feasibility::Yes);
    }

    #[test]
    fn three_forces_a_large_height() {
        let th = Threshold::new(&q("sqrt(12)")).unwrap();
        assert_eq!(th.max_letter(), 2);
        assert_eq!(th.safe_letter(), 1);
        let th = Threshold::new(&q("7/2")).unwrap();
        assert_eq!(th.max_letter(), 2);
        assert_eq!(th.safe_letter(), 2);
        let th = Threshold::new(&q("18/5")).unwrap();
        assert_eq!(th.max_letter(), 3);
        // with only 1s and 3s around, the 3 sits at (6 + sqrt(21))/3 > sqrt(12)
        let m = th.min_height_exact(&[3], 0);
        assert_eq!(m, q("(6+sqrt(21))/3"));
    }

    #[test]
    fn rejects_out_of_range_thresholds() {
        assert!(Threshold::new(&q("29/10")).is_err());
        assert!(Threshold::new(&q("5")).is_err());
    }
}
