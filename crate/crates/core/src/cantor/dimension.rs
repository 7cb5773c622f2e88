//! Hausdorff dimension of Gauss-Cantor sets from depth-`n` covers.
//!
//! With `psi_gamma(x) = [0; gamma + x] = (p + p' x)/(q + q' x)` the branch
//! derivative is `|psi_gamma'(x)| = (q + q' x)^-2`. Put
//! `Z_n(s, x) = sum_{gamma in B^n} |psi_gamma'(x)|^s`; then `Z_{n+1} = L_s Z_n`
//! for the transfer operator `L_s`, and its leading eigenvalue `lambda(s)` lies
//! between `min_x` and `max_x` of `Z_{n+1}/Z_n` over the hull of `K(B)`.
//! Since `lambda` decreases in `s` and `lambda(HD) = 1`, the zeros of those two
//! functions bracket the dimension. The extrema are sampled on a grid.

use num_bigint::BigInt;
use rayon::prelude::*;

use super::alphabet::WordAlphabet;
use crate::error::{Error, Result};

/// Grid points on the hull where the ratio is sampled.
pub const GRID: usize = 17;
/// Bisection stops when the bracket on `s` is narrower than this.
pub const BISECTION_TOL: f64 = 1e-10;
/// Most words per level the estimator will enumerate.
pub const MAX_WORDS: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq)]
pub struct DimensionBracket {
    pub lower: f64,
    pub upper: f64,
    pub depth: usize,
    pub method: &'static str,
    /// Root of `sum len(I(gamma))^s = 1` over the depth-`n` cover (no distortion correction).
    pub cover_estimate: f64,
}

impl DimensionBracket {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }

    pub fn overlaps(&self, other: &DimensionBracket) -> bool {
        self.lower <= other.upper && other.lower <= self.upper
    }
}

/// Interval hull of `K(B)`, from iterating the branch maps on `[0, 1]`.
pub fn hull(b: &WordAlphabet) -> (f64, f64) {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..500 {
        let mut nlo = f64::INFINITY;
        let mut nhi = f64::NEG_INFINITY;
        for w in b.words() {
            for t in [lo, hi] {
                let mut x = t;
                for &a in w.iter().rev() {
                    x = 1.0 / (a as f64 + x);
                }
                nlo = nlo.min(x);
                nhi = nhi.max(x);
            }
        }
        if (nlo - lo).abs() < 1e-17 && (nhi - hi).abs() < 1e-17 {
            break;
        }
        lo = nlo;
        hi = nhi;
    }
    (lo, hi)
}

/// `(q', q)` for every concatenation of `n` words, in f64.
fn continuant_pairs(b: &WordAlphabet, n: usize) -> Vec<(f64, f64)> {
    let mut states = vec![(0.0f64, 1.0f64)];
    for _ in 0..n {
        states = states
            .iter()
            .flat_map(|&(qp, q)| {
                b.words().iter().map(move |w| {
                    let (mut qp, mut q) = (qp, q);
                    for &a in w {
                        let nq = a as f64 * q + qp;
                        qp = q;
                        q = nq;
                    }
                    (qp, q)
                })
            })
            .collect();
    }
    states
}

const CHUNK: usize = 4096;

/// `ln sum_i exp(-s * terms[i])` with terms stored per grid point; summed in
/// fixed chunks so the result does not depend on thread scheduling.
fn log_sum(terms: &[f64], s: f64) -> f64 {
    let m = terms.iter().copied().fold(f64::INFINITY, f64::min);
    let partial: Vec<f64> = terms
        .par_chunks(CHUNK)
        .map(|c| c.iter().map(|&t| (-s * (t - m)).exp()).sum::<f64>())
        .collect();
    partial.iter().sum::<f64>().ln() - s * m
}

struct Level {
    /// `terms[g][i] = 2 ln(q_i + q'_i x_g)`
    terms: Vec<Vec<f64>>,
}

impl Level {
    fn new(pairs: &[(f64, f64)], xs: &[f64]) -> Self {
        let terms = xs
            .iter()
            .map(|&x| pairs.par_iter().map(|&(qp, q)| 2.0 * (q + qp * x).ln()).collect())
            .collect();
        Level { terms }
    }

    fn log_z(&self, s: f64) -> Vec<f64> {
        self.terms.iter().map(|t| log_sum(t, s)).collect()
    }
}

/// Largest `s` in `[0, hi]` with `g(s) > 0` for decreasing `g`, by bisection.
fn bisect(g: impl Fn(f64) -> f64, hi: f64) -> f64 {
    let (mut a, mut b) = (0.0f64, hi);
    while b - a > BISECTION_TOL {
        let mid = 0.5 * (a + b);
        if g(mid) > 0.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}

fn check_size(b: &WordAlphabet, depth: usize) -> Result<()> {
    let size = (b.len() as f64).powi(depth as i32 + 1);
    if size > MAX_WORDS as f64 {
        return Err(Error::BudgetExhausted(format!(
            "depth {depth} needs {size:.0} words (limit {MAX_WORDS})"
        )));
    }
    Ok(())
}

/// Bracket for `HD(K(B))` from covers of depth `n` and `n + 1`.
pub fn dimension_bracket(b: &WordAlphabet, depth: usize) -> Result<DimensionBracket> {
    if depth == 0 {
        return Err(Error::InvalidInput("depth must be at least 1".into()));
    }
    if b.len() < 2 {
        return Ok(DimensionBracket {
            lower: 0.0,
            upper: 0.0,
            depth,
            method: "single branch",
            cover_estimate: 0.0,
        });
    }
    check_size(b, depth)?;
    let (lo, hi) = hull(b);
    let xs: Vec<f64> = (0..GRID)
        .map(|i| lo + (hi - lo) * i as f64 / (GRID - 1) as f64)
        .collect();
    let pn = continuant_pairs(b, depth);
    let pn1 = continuant_pairs(b, depth + 1);
    let ln = Level::new(&pn, &xs);
    let ln1 = Level::new(&pn1, &xs);
    let ratios = |s: f64| -> (f64, f64) {
        let a = ln1.log_z(s);
        let c = ln.log_z(s);
        a.iter().zip(&c).map(|(x, y)| x - y).fold(
            (f64::INFINITY, f64::NEG_INFINITY),
            |(mn, mx), r| (mn.min(r), mx.max(r)),
        )
    };
    // dimension of a Gauss-Cantor set is below 1; allow a little room
    let lower = bisect(|s| ratios(s).0, 1.5);
    let upper = bisect(|s| ratios(s).1, 1.5);
    // raw cover: len(I(gamma)) = 1/(q (q + q'))
    let cover_terms: Vec<f64> = pn.iter().map(|&(qp, q)| (q * (q + qp)).ln()).collect();
    let cover_estimate = bisect(|s| log_sum(&cover_terms, s), 1.5);
    Ok(DimensionBracket {
        lower: lower.min(upper),
        upper: upper.max(lower),
        depth,
        method: "transfer-operator ratio bracket on cover pressure",
        cover_estimate,
    })
}

/// Brackets for `K(B)` and `K(B^T)` at the same depth, plus whether the
/// multisets of cover denominators `q(gamma)` agree (they must, by Euler's rule).
#[derive(Clone, Debug, PartialEq)]
pub struct TransposeCheck {
    pub bracket: DimensionBracket,
    pub transposed: DimensionBracket,
    pub denominators_match: bool,
}

/// Sorted `q(gamma)` over the depth-`n` cover.
pub fn cover_denominators(b: &WordAlphabet, depth: usize) -> Vec<BigInt> {
    let mut qs: Vec<BigInt> = b
        .concatenations(depth)
        .iter()
        .map(|w| crate::cf::continuant(w))
        .collect();
    qs.sort();
    qs
}

pub fn transpose_dimension_check(b: &WordAlphabet, depth: usize) -> Result<TransposeCheck> {
    let bt = b.transpose()?;
    Ok(TransposeCheck {
        bracket: dimension_bracket(b, depth)?,
        transposed: dimension_bracket(&bt, depth)?,
        denominators_match: cover_denominators(b, depth) == cover_denominators(&bt, depth),
    })
}

/// `1 - 6/(pi^2 A) - 72 log A / (pi^4 A^2)`.
pub fn hensley_asymptotic(a: u64) -> f64 {
    let a = a as f64;
    let pi2 = std::f64::consts::PI.powi(2);
    1.0 - 6.0 / (pi2 * a) - 72.0 * a.ln() / (pi2 * pi2 * a * a)
}

#[derive(Clone, Debug, PartialEq)]
pub struct HensleyReport {
    pub a: u64,
    pub bracket: DimensionBracket,
    pub asymptotic: f64,
    /// Distance from the asymptotic value to the bracket (0 if inside).
    pub gap: f64,
}

/// Depth with roughly `A^(n+1) <= 2e5` words.
pub fn hensley_depth(a: u64) -> usize {
    let n = (2e5f64.ln() / (a as f64).ln()).floor() as usize;
    n.saturating_sub(1).max(1)
}

pub fn hensley_check(a: u64) -> Result<HensleyReport> {
    if a < 2 {
        return Err(Error::InvalidInput("A must be at least 2".into()));
    }
    let bracket = dimension_bracket(&WordAlphabet::letters_up_to(a), hensley_depth(a))?;
    let asymptotic = hensley_asymptotic(a);
    let gap = if bracket.contains(asymptotic) {
        0.0
    } else {
        (asymptotic - bracket.lower).abs().min((asymptotic - bracket.upper).abs())
    };
    Ok(HensleyReport {
        a,
        bracket,
        asymptotic,
        gap,
    })
}

/// Reference values: `HD(C(2))`, `HD(C(3))`, `HD(C(4))`.
pub const HD_C2: f64 = 0.531_280_506_277_205_1;
pub const HD_C3: f64 = 0.705;
pub const HD_C4: f64 = 0.788;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hull_of_c_a_matches_closed_form() {
        // [0; overline(A,1)] and [0; overline(1,A)]
        let (lo, hi) = hull(&WordAlphabet::letters_up_to(4));
        assert!((lo - (2f64.sqrt() - 1.0) / 2.0).abs() < 1e-12);
        assert!((hi - (2.0 * 2f64.sqrt() - 2.0)).abs() < 1e-12);
    }

    #[test]
    fn c2_bracket_small_depth() {
        let b = dimension_bracket(&WordAlphabet::letters_up_to(2), 10).unwrap();
        assert!(b.contains(HD_C2), "{b:?}");
        assert!(b.width() < 1e-2);
    }

    #[test]
    fn transpose_denominators() {
        let b: WordAlphabet = "2.1,1.2.3".parse().unwrap();
        let t = transpose_dimension_check(&b, 3).unwrap();
        assert!(t.denominators_match);
        assert!(t.bracket.overlaps(&t.transposed));
    }

    #[test]
    fn hensley_asymptotic_values() {
        assert!((hensley_asymptotic(2) - 0.5675).abs() < 1e-3);
        assert!(hensley_asymptotic(20) > 0.96);
    }
}
