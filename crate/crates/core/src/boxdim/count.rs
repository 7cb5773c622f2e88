//! `#C+(t, r)`: minimal words of scale `r` whose cylinders meet `K_t+`, and
//! the box dimension estimates built from them.

use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;

use super::feasible::{Feasibility, Threshold, YES_DEPTH};
use crate::error::{Error, Result};
use crate::numeric::exp_table::floor_ln_u128;

/// Largest scale the `u128` continuants support.
pub const MAX_SCALE: u32 = 80;
/// Default cap on visited words.
pub const COUNT_BUDGET: usize = 50_000_000;

#[derive(Clone, Debug, PartialEq)]
pub struct CountRecord {
    pub t: String,
    pub r: u32,
    /// Words certified to meet `K_t+`.
    pub count_yes: u64,
    /// Words neither certified nor excluded.
    pub count_maybe: u64,
    /// Words and prefixes excluded (subtrees not explored).
    pub pruned: u64,
    /// `(1/r) ln(4 (yes + maybe))`, absent at `r = 0`.
    pub dim_estimate: Option<f64>,
}

impl CountRecord {
    /// `#C+(t, r)` as an over-approximation.
    pub fn count(&self) -> u64 {
        self.count_yes + self.count_maybe
    }

    pub fn count_for(&self, mode: Mode) -> u64 {
        match mode {
            Mode::Upper => self.count(),
            Mode::Lower => self.count_yes,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// YES and MAYBE words.
    Upper,
    /// YES words only.
    Lower,
}

/// Per-scale tallies for `r` in `r_lo..=r_hi`.
struct Tally {
    yes: Vec<u64>,
    maybe: Vec<u64>,
    pruned: Vec<u64>,
    words: Vec<Vec<u64>>,
}

impl Tally {
    fn new(n: usize) -> Self {
        Tally {
            yes: vec![0; n],
            maybe: vec![0; n],
            pruned: vec![0; n],
            words: Vec::new(),
        }
    }

    fn merge(&mut self, o: Tally) {
        for (a, b) in [(&mut self.yes, o.yes), (&mut self.maybe, o.maybe), (&mut self.pruned, o.pruned)] {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
        }
        self.words.extend(o.words);
    }
}

struct Search<'a> {
    th: &'a Threshold,
    r_lo: u32,
    r_hi: u32,
    keep_words: bool,
    visited: &'a AtomicUsize,
    budget: usize,
}

impl Search<'_> {
    /// `word` lies in `P_r+` exactly for `prefix_scale < r <= scale`
    /// (`prefix_scale = None` for one-letter words), so each word is
    /// classified once and counted at every such `r`.
    fn visit(
        &self,
        word: &mut Vec<u64>,
        q: u128,
        qp: u128,
        prefix_scale: Option<u32>,
        tally: &mut Tally,
    ) -> Result<()> {
        if self.visited.fetch_add(1, Ordering::Relaxed) >= self.budget {
            return Err(Error::BudgetExhausted(format!(
                "C+ enumeration visited {} words",
                self.budget
            )));
        }
        let scale = floor_ln_u128(q * (q + qp));
        let first = prefix_scale.map_or(0, |s| s + 1).max(self.r_lo);
        let last = scale.min(self.r_hi);
        let mut verdict = None;
        if first <= last {
            let v = self.th.classify(word, YES_DEPTH);
            for r in first..=last {
                let i = (r - self.r_lo) as usize;
                match v {
                    Feasibility::No => tally.pruned[i] += 1,
                    Feasibility::Yes => tally.yes[i] += 1,
                    Feasibility::Maybe => tally.maybe[i] += 1,
                }
            }
            if self.keep_words && v != Feasibility::No {
                tally.words.push(word.clone());
            }
            verdict = Some(v);
        }
        if scale >= self.r_hi {
            return Ok(());
        }
        let excluded = match verdict {
            Some(v) => v == Feasibility::No,
            None => self.th.min_height_exceeds(word),
        };
        if excluded {
            for r in (scale + 1).max(self.r_lo)..=self.r_hi {
                tally.pruned[(r - self.r_lo) as usize] += 1;
            }
            return Ok(());
        }
        for a in 1..=self.th.letter_bound() {
            word.push(a);
            let res = self.visit(word, a as u128 * q + qp, q, Some(scale), tally);
            word.pop();
            res?;
        }
        Ok(())
    }
}

fn run(th: &Threshold, r_lo: u32, r_hi: u32, keep_words: bool, budget: usize) -> Result<Tally> {
    if r_hi > MAX_SCALE {
        return Err(Error::InvalidInput(format!("scale {r_hi} above {MAX_SCALE}")));
    }
    let n = (r_hi - r_lo + 1) as usize;
    let visited = AtomicUsize::new(0);
    let search = Search {
        th,
        r_lo,
        r_hi,
        keep_words,
        visited: &visited,
        budget,
    };
    let parts: Vec<Result<Tally>> = (1..=th.letter_bound())
        .into_par_iter()
        .map(|a| {
            let mut tally = Tally::new(n);
            search.visit(&mut vec![a], a as u128, 1, None, &mut tally)?;
            Ok(tally)
        })
        .collect();
    let mut total = Tally::new(n);
    for p in parts {
        total.merge(p?);
    }
    Ok(total)
}

fn label(th: &Threshold) -> String {
    th.t().to_string()
}

fn records(th: &Threshold, r_lo: u32, r_hi: u32, budget: usize) -> Result<Vec<CountRecord>> {
    let tally = run(th, r_lo, r_hi, false, budget)?;
    Ok((r_lo..=r_hi)
        .map(|r| {
            let i = (r - r_lo) as usize;
            let total = tally.yes[i] + tally.maybe[i];
            CountRecord {
                t: label(th),
                r,
                count_yes: tally.yes[i],
                count_maybe: tally.maybe[i],
                pruned: tally.pruned[i],
                dim_estimate: (r > 0 && total > 0).then(|| (4.0 * total as f64).ln() / r as f64),
            }
        })
        .collect())
}

pub fn count_c_plus(th: &Threshold, r: u32) -> Result<CountRecord> {
    count_c_plus_budget(th, r, COUNT_BUDGET)
}

pub fn count_c_plus_budget(th: &Threshold, r: u32, budget: usize) -> Result<CountRecord> {
    Ok(records(th, r, r, budget)?.remove(0))
}

/// Records for every `r` in `r_lo..=r_hi` from one enumeration.
pub fn count_c_plus_range(th: &Threshold, r_lo: u32, r_hi: u32) -> Result<Vec<CountRecord>> {
    if r_lo > r_hi {
        return Err(Error::InvalidInput("empty scale range".into()));
    }
    records(th, r_lo, r_hi, COUNT_BUDGET)
}

/// The words counted in `#C+(t, r)` (YES or MAYBE), sorted.
pub fn c_plus_words(th: &Threshold, r: u32) -> Result<Vec<Vec<u64>>> {
    let mut words = run(th, r, r, true, COUNT_BUDGET)?.words;
    words.sort();
    Ok(words)
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoxDimension {
    pub mode: Mode,
    /// Records for `r = 1..=r_max`.
    pub records: Vec<CountRecord>,
    /// `(1/m) ln(4 #C+(t, m))` for each `m`.
    pub sequence: Vec<f64>,
    /// `inf_m (1/m) ln(4 #C+(t, m))`, an upper bound by submultiplicativity.
    pub fekete: f64,
    /// `(1/r_max) ln #C+(t, r_max)`.
    pub limit: f64,
    /// Least-squares slope of `ln #C+(t, m)` over `m` in `[r_max/2, r_max]`;
    /// the running estimate of the growth rate (empirical).
    pub slope: f64,
}

impl BoxDimension {
    /// The upper estimate `Delta+(t) <= fekete`.
    pub fn estimate(&self) -> f64 {
        self.fekete
    }
}

pub fn box_dimension(th: &Threshold, r_max: u32, mode: Mode) -> Result<BoxDimension> {
    if r_max == 0 {
        return Err(Error::InvalidInput("r_max must be at least 1".into()));
    }
    let records = count_c_plus_range(th, 1, r_max)?;
    let logs: Vec<f64> = records
        .iter()
        .map(|c| (c.count_for(mode) as f64).ln())
        .collect();
    let sequence: Vec<f64> = records
        .iter()
        .zip(&logs)
        .map(|(c, l)| (4f64.ln() + l) / c.r as f64)
        .collect();
    let fekete = sequence.iter().copied().fold(f64::INFINITY, f64::min).max(0.0);
    let limit = (logs[logs.len() - 1] / r_max as f64).max(0.0);
    let pts: Vec<(f64, f64)> = records
        .iter()
        .zip(&logs)
        .filter(|(c, l)| 2 * c.r >= r_max && l.is_finite())
        .map(|(c, &l)| (c.r as f64, l))
        .collect();
    let slope = if pts.len() >= 2 {
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        (sxy / sxx).max(0.0)
    } else {
        limit
    };
    Ok(BoxDimension {
        mode,
        records,
        sequence,
        fekete,
        limit,
        slope,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct DEstimate {
    pub mode: Mode,
    /// `min(1, 2 fekete)`.
    pub d: f64,
    /// `min(1, 2 slope)`, empirical.
    pub d_running: f64,
    pub dimension: BoxDimension,
}

/// `d(t) = min(1, 2 Delta+(t))` from counts up to `r_max`.
pub fn d_estimate(th: &Threshold, r_max: u32, mode: Mode) -> Result<DEstimate> {
    let dimension = box_dimension(th, r_max, mode)?;
    Ok(DEstimate {
        mode,
        d: (2.0 * dimension.fekete).min(1.0),
        d_running: (2.0 * dimension.slope).min(1.0),
        dimension,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boxdim::scale::is_minimal;
    use crate::numeric::Quad;

    fn th(s: &str) -> Threshold {
        Threshold::new(&s.parse::<Quad>().unwrap()).unwrap()
    }

    /// Minimal words over `{1, 2}` by brute force.
    fn minimal_12_words(r: u32) -> Vec<Vec<u64>> {
        let mut out = Vec::new();
        let mut stack = vec![vec![1u64], vec![2]];
        while let Some(w) = stack.pop() {
            if is_minimal(&w, r) {
                out.push(w);
            } else if super::super::scale::unstable_scale(&w) < r {
                for a in [1, 2] {
                    let mut n = w.clone();
                    n.push(a);
                    stack.push(n);
                }
            }
        }
        out.sort();
        out
    }

    #[test]
    fn sqrt12_counts_exactly_the_12_words() {
        let t = th("sqrt(12)");
        for r in 0..=10 {
            assert_eq!(c_plus_words(&t, r).unwrap(), minimal_12_words(r), "r={r}");
        }
    }

    #[test]
    fn counts_at_three() {
        let t = th("3");
        let c = count_c_plus(&t, 0).unwrap();
        assert!(c.count() >= 1);
        assert!(c.dim_estimate.is_none());
    }

    #[test]
    fn monotone_in_t() {
        let ts = ["3", "31/10", "33/10", "sqrt(12)", "18/5"];
        for r in [4, 8, 12] {
            let counts: Vec<u64> = ts.iter().map(|s| count_c_plus(&th(s), r).unwrap().count()).collect();
            assert!(counts.windows(2).all(|w| w[0] <= w[1]), "r={r}: {counts:?}");
        }
    }

    #[test]
    fn one_pass_matches_separate_counts() {
        let t = th("33/10");
        let all = count_c_plus_range(&t, 0, 9).unwrap();
        for rec in &all {
            assert_eq!(rec, &count_c_plus(&t, rec.r).unwrap());
        }
    }

    #[test]
    fn budget_is_enforced() {
        let err = count_c_plus_budget(&th("sqrt(12)"), 20, 100).unwrap_err();
        assert!(matches!(err, Error::BudgetExhausted(_)));
    }
}
