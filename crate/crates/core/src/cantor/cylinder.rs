use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;

use super::alphabet::WordAlphabet;
use crate::cf::continuant_pair;
use crate::error::{Error, Result};

/// `I(beta)`: the numbers `[0; beta, t]` with `t >= 1`, between `[0; beta]`
/// and `[0; beta_1, ..., beta_n + 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CylinderInterval {
    pub word: Vec<u64>,
    pub lo: BigRational,
    pub hi: BigRational,
    /// `q(beta)`
    pub q: BigInt,
    /// `q(beta without its last letter)`
    pub q_prev: BigInt,
}

impl CylinderInterval {
    /// `1 / (q (q + q'))`.
    pub fn length(&self) -> BigRational {
        BigRational::new(BigInt::one(), &self.q * (&self.q + &self.q_prev))
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }
}

/// Numerator and denominator convergents `(p, p', q, q')` of `[0; word]`.
pub(crate) fn word_matrix(word: &[u64]) -> (BigInt, BigInt, BigInt, BigInt) {
    let (q, q_prev) = continuant_pair(word);
    let (p, p_prev) = if word.is_empty() {
        (BigInt::from(0), BigInt::one())
    } else {
        continuant_pair(&word[1..])
    };
    (p, p_prev, q, q_prev)
}

pub fn cylinder(word: &[u64]) -> Result<CylinderInterval> {
    if word.is_empty() || word.contains(&0) {
        return Err(Error::InvalidInput("cylinder word must be nonempty and positive".into()));
    }
    let (p, p_prev, q, q_prev) = word_matrix(word);
    let a = BigRational::new(p.clone(), q.clone());
    let b = BigRational::new(&p + &p_prev, &q + &q_prev);
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    Ok(CylinderInterval {
        word: word.to_vec(),
        lo,
        hi,
        q,
        q_prev,
    })
}

/// Largest cover generated without complaint.
pub const MAX_COVER: usize = 5_000_000;

/// The `|B|^n` cylinders of the concatenations of `n` words of `B`.
pub fn generate_cover(b: &WordAlphabet, depth: usize) -> Result<Vec<CylinderInterval>> {
    let size = (b.len() as f64).powi(depth as i32);
    if size > MAX_COVER as f64 {
        return Err(Error::BudgetExhausted(format!(
            "cover of depth {depth} has {size:.0} cylinders"
        )));
    }
    b.concatenations(depth)
        .par_iter()
        .map(|w| cylinder(w))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rational::rat;

    #[test]
    fn cylinder_examples() {
        let c = cylinder(&[1]).unwrap();
        assert_eq!((c.lo.clone(), c.hi.clone()), (rat(1, 2), rat(1, 1)));
        assert_eq!(c.length(), rat(1, 2));
        let c = cylinder(&[2, 1]).unwrap();
        assert_eq!((c.lo.clone(), c.hi.clone()), (rat(1, 3), rat(2, 5)));
        assert_eq!(c.length(), rat(1, 15));
    }

    #[test]
    fn covers_are_disjoint_and_nested() {
        let b = WordAlphabet::letters_up_to(2);
        let mut cover = generate_cover(&b, 2).unwrap();
        assert_eq!(cover.len(), 4);
        cover.sort_by(|x, y| x.lo.cmp(&y.lo));
        for w in cover.windows(2) {
            assert!(w[0].hi <= w[1].lo);
        }
        let parent = cylinder(&[2]).unwrap();
        for c in cover.iter().filter(|c| c.word[0] == 2) {
            assert!(parent.lo <= c.lo && c.hi <= parent.hi);
        }
    }
}
