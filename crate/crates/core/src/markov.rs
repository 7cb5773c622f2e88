//! Markov triples `x^2 + y^2 + z^2 = 3xyz` and the discrete part of the spectrum.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::numeric::Quad;

/// A solution with `x <= y <= z`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MarkovTriple {
    pub x: BigUint,
    pub y: BigUint,
    pub z: BigUint,
}

impl MarkovTriple {
    pub fn root() -> Self {
        let one = BigUint::one();
        MarkovTriple {
            x: one.clone(),
            y: one.clone(),
            z: one,
        }
    }

    /// Sorts the coordinates and checks the Markov equation.
    pub fn new(a: u64, b: u64, c: u64) -> Result<Self> {
        let t = Self::from_coords([a.into(), b.into(), c.into()]).0;
        if !t.is_solution() {
            return Err(Error::InvalidInput(format!("({a},{b},{c}) is not a Markov triple")));
        }
        Ok(t)
    }

    /// Normalizes, returning the sorting permutation (`perm[i]` = new slot of coordinate `i`).
    fn from_coords(c: [BigUint; 3]) -> (Self, [usize; 3]) {
        let mut idx = [0usize, 1, 2];
        idx.sort_by(|&i, &j| c[i].cmp(&c[j]).then(i.cmp(&j)));
        let mut perm = [0usize; 3];
        for (slot, &i) in idx.iter().enumerate() {
            perm[i] = slot;
        }
        let [a, b, d] = idx.map(|i| c[i].clone());
        (MarkovTriple { x: a, y: b, z: d }, perm)
    }

    pub fn coords(&self) -> [BigUint; 3] {
        [self.x.clone(), self.y.clone(), self.z.clone()]
    }

    pub fn is_solution(&self) -> bool {
        let lhs = &self.x * &self.x + &self.y * &self.y + &self.z * &self.z;
        let rhs = BigUint::from(3u32) * &self.x * &self.y * &self.z;
        lhs == rhs
    }

    /// The Markov number of the triple (its largest coordinate).
    pub fn markov_number(&self) -> &BigUint {
        &self.z
    }
}

impl fmt::Display for MarkovTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.x, self.y, self.z)
    }
}

/// Replaces coordinate `i` (1-based) by `3 * (product of the others) - coordinate`
/// and renormalizes. Also returns the 1-based slot the new coordinate landed in,
/// so applying the step again at that slot undoes it.
pub fn vieta_step(t: &MarkovTriple, i: usize) -> Result<(MarkovTriple, usize)> {
    if !(1..=3).contains(&i) {
        return Err(Error::InvalidInput(format!("coordinate index {i} not in 1..=3")));
    }
    let mut c = t.coords();
    let k = i - 1;
    let others = BigUint::from(3u32) * &c[(k + 1) % 3] * &c[(k + 2) % 3];
    c[k] = others - &c[k];
    let (out, perm) = MarkovTriple::from_coords(c);
    Ok((out, perm[k] + 1))
}

/// All normalized triples with `z <= bound`, sorted by `z` (then `x`, `y`).
pub fn enumerate_tree(bound: &BigUint) -> Vec<MarkovTriple> {
    let mut seen: HashSet<MarkovTriple> = HashSet::new();
    let mut queue = VecDeque::new();
    let root = MarkovTriple::root();
    if &root.z <= bound {
        seen.insert(root.clone());
        queue.push_back(root);
    }
    while let Some(t) = queue.pop_front() {
        for i in 1..=3 {
            let (n, _) = vieta_step(&t, i).expect("valid index");
            if &n.z <= bound && !seen.contains(&n) {
                seen.insert(n.clone());
                queue.push_back(n);
            }
        }
    }
    let mut out: Vec<_> = seen.into_iter().collect();
    out.sort_by(|a, b| (&a.z, &a.x, &a.y).cmp(&(&b.z, &b.x, &b.y)));
    out
}

/// A Markov number with the number of normalized triples having it as maximum.
/// A multiplicity above one would contradict the uniqueness conjecture.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkovNumber {
    pub m: BigUint,
    pub multiplicity: usize,
}

pub fn markov_numbers(bound: &BigUint) -> Vec<MarkovNumber> {
    let mut counts: BTreeMap<BigUint, usize> = BTreeMap::new();
    for t in enumerate_tree(bound) {
        *counts.entry(t.z).or_default() += 1;
    }
    counts
        .into_iter()
        .map(|(m, multiplicity)| MarkovNumber { m, multiplicity })
        .collect()
}

/// `k = sqrt(9 m^2 - 4) / m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumPoint {
    pub m: BigUint,
    /// `9 m^2 - 4`.
    pub discriminant: BigUint,
}

impl SpectrumPoint {
    pub fn new(m: BigUint) -> Self {
        let discriminant = BigUint::from(9u32) * &m * &m - BigUint::from(4u32);
        SpectrumPoint { m, discriminant }
    }

    pub fn value(&self) -> Quad {
        Quad::new(
            BigRational::from_integer(BigInt::from(0)),
            BigRational::new(BigInt::one(), BigInt::from(self.m.clone())),
            BigInt::from(self.discriminant.clone()),
        )
        .expect("positive discriminant")
    }

    /// `sqrt(D)/m` with the raw discriminant.
    pub fn label(&self) -> String {
        format!("sqrt({})/{}", self.discriminant, self.m)
    }
}

pub fn spectrum_points(bound: &BigUint) -> Vec<SpectrumPoint> {
    markov_numbers(bound)
        .into_iter()
        .map(|n| SpectrumPoint::new(n.m))
        .collect()
}

/// `M(x)` under both multiplicity conventions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkovCount {
    /// Distinct Markov numbers `<= x`.
    pub distinct: usize,
    /// Triples with maximum `<= x` (each Markov number counted once per triple).
    pub with_multiplicity: usize,
}

pub fn count_markov(x: &BigUint) -> MarkovCount {
    let nums = markov_numbers(x);
    MarkovCount {
        distinct: nums.len(),
        with_multiplicity: nums.iter().map(|n| n.multiplicity).sum(),
    }
}

/// One grid point of the fit.
#[derive(Clone, Debug, PartialEq)]
pub struct FitPoint {
    pub x: f64,
    pub count: usize,
    /// `c (log 3x)^2`
    pub fitted: f64,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MarkovFit {
    /// Least-squares `c` in `M(x) ~ c (log 3x)^2`.
    pub c: f64,
    /// Same fit against plain `(log x)^2`.
    pub c_plain_log: f64,
    /// Fit of the with-multiplicity count against `(log 3x)^2`.
    pub c_with_multiplicity: f64,
    pub points: Vec<FitPoint>,
}

/// Fits `M(x) = c (log 3x)^2` on the grid `x = 10^{j/4}`, `1 <= x <= x_max`.
pub fn fit_markov_constant(x_max: &BigUint) -> MarkovFit {
    let nums = markov_numbers(x_max);
    let ms: Vec<f64> = nums.iter().map(|n| n.m.to_f64().unwrap_or(f64::INFINITY)).collect();
    let mut cum = Vec::with_capacity(nums.len());
    let mut acc = 0usize;
    for n in &nums {
        acc += n.multiplicity;
        cum.push(acc);
    }
    let top = x_max.to_f64().unwrap_or(f64::INFINITY).log10();
    let steps = (4.0 * top + 1e-9).floor() as i32;
    let grid: Vec<f64> = (0..=steps).map(|j| 10f64.powf(j as f64 / 4.0)).collect();
    let count_at = |x: f64| ms.partition_point(|&m| m <= x * (1.0 + 1e-12));
    let lsq = |counts: &dyn Fn(f64) -> f64, basis: &dyn Fn(f64) -> f64| {
        let (mut num, mut den) = (0.0, 0.0);
        for &x in &grid {
            let l = basis(x);
            num += counts(x) * l;
            den += l * l;
        }
        num / den
    };
    let log3 = |x: f64| (3.0 * x).ln().powi(2);
    let plain = |x: f64| x.ln().powi(2);
    let distinct = |x: f64| count_at(x) as f64;
    let multi = |x: f64| {
        let k = count_at(x);
        if k == 0 {
            0.0
        } else {
            cum[k - 1] as f64
        }
    };
    let c = lsq(&distinct, &log3);
    let points = grid
        .iter()
        .map(|&x| {
            let count = count_at(x);
            let fitted = c * log3(x);
            FitPoint {
                x,
                count,
                fitted,
                residual: count as f64 - fitted,
            }
        })
        .collect();
    MarkovFit {
        c,
        c_plain_log: lsq(&distinct, &plain),
        c_with_multiplicity: lsq(&multi, &log3),
        points,
    }
}

/// The constant in `M(x) ~ c (log 3x)^2`.
pub const ZAGIER_CONSTANT: f64 = 0.180_717_047_115_07;
