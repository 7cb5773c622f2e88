use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::numeric::{BoundedValue, Quad};

/// How the stored quotients relate to the full expansion.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Tail {
    /// Complete expansion of a rational; last quotient is at least 2.
    Terminating,
    /// Leading part of an infinite expansion.
    Prefix,
    /// `quotients[start..]` repeats forever.
    Periodic { start: usize },
}

/// `[a0; a1, a2, ...]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CfExpansion {
    a0: BigInt,
    quotients: Vec<BigInt>,
    tail: Tail,
}

/// `p_n/q_n` together with `p_{n-1}/q_{n-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvergentPair {
    pub index: i64,
    pub p: BigInt,
    pub q: BigInt,
    pub p_prev: BigInt,
    pub q_prev: BigInt,
}

impl ConvergentPair {
    /// Index -1: `p_{-1}/q_{-1} = 1/0`, `p_{-2}/q_{-2} = 0/1`.
    pub fn seed() -> Self {
        ConvergentPair {
            index: -1,
            p: BigInt::one(),
            q: BigInt::zero(),
            p_prev: BigInt::zero(),
            q_prev: BigInt::one(),
        }
    }

    pub fn next(&self, a: &BigInt) -> Self {
        ConvergentPair {
            index: self.index + 1,
            p: a * &self.p + &self.p_prev,
            q: a * &self.q + &self.q_prev,
            p_prev: self.p.clone(),
            q_prev: self.q.clone(),
        }
    }

    pub fn value(&self) -> BigRational {
        BigRational::new(self.p.clone(), self.q.clone())
    }

    /// `p_n q_{n-1} - p_{n-1} q_n`, which equals `(-1)^(n-1)`.
    pub fn determinant(&self) -> BigInt {
        &self.p * &self.q_prev - &self.p_prev * &self.q
    }

    /// The sign `(-1)^(n-1)` the determinant must have.
    pub fn expected_determinant(&self) -> i8 {
        if (self.index - 1).rem_euclid(2) == 0 {
            1
        } else {
            -1
        }
    }

    /// Enclosure of every number whose expansion starts with the quotients up
    /// to this index (each later quotient at least 1).
    pub fn cylinder(&self) -> BoundedValue {
        let a = self.value();
        let b = BigRational::new(&self.p + &self.p_prev, &self.q + &self.q_prev);
        BoundedValue::spanning(a, b)
    }
}

/// Computed determinant sign for the pair, checked against `(-1)^(n-1)`.
pub fn determinant_check(cp: &ConvergentPair) -> Result<i8> {
    let d = cp.determinant();
    let s: i8 = if d == BigInt::one() {
        1
    } else if d == -BigInt::one() {
        -1
    } else {
        return Err(Error::InvalidInput(format!(
            "determinant {d} is not a unit at index {}",
            cp.index
        )));
    };
    if s != cp.expected_determinant() {
        return Err(Error::InvalidInput(format!(
            "determinant sign {s} at index {} contradicts (-1)^(n-1)",
            cp.index
        )));
    }
    Ok(s)
}

impl CfExpansion {
    /// Builds an expansion, canonicalizing terminating ones (`[..., a, 1]` becomes `[..., a+1]`).
    pub fn new(a0: BigInt, quotients: Vec<BigInt>, tail: Tail) -> Result<Self> {
        if let Some(bad) = quotients.iter().find(|a| !a.is_positive()) {
            return Err(Error::InvalidInput(format!(
                "partial quotients must be positive, got {bad}"
            )));
        }
        let mut cf = CfExpansion {
            a0,
            quotients,
            tail,
        };
        match cf.tail {
            Tail::Terminating => {
                if cf.quotients.last().is_some_and(|a| a.is_one()) {
                    cf.quotients.pop();
                    match cf.quotients.last_mut() {
                        Some(last) => *last += 1,
                        None => cf.a0 += 1,
                    }
                }
            }
            Tail::Periodic { start } => {
                if start >= cf.quotients.len() {
                    return Err(Error::InvalidInput("empty period".into()));
                }
            }
            Tail::Prefix => {}
        }
        Ok(cf)
    }

    pub fn from_i64(a0: i64, quotients: &[i64], tail: Tail) -> Result<Self> {
        Self::new(
            BigInt::from(a0),
            quotients.iter().map(|&a| BigInt::from(a)).collect(),
            tail,
        )
    }

    /// Purely periodic tail after `a0`, e.g. `[1; 1, 1, ...]` is `periodic(1, &[], &[1])`.
    pub fn periodic(a0: i64, pre: &[i64], period: &[i64]) -> Result<Self> {
        let mut q: Vec<i64> = pre.to_vec();
        q.extend_from_slice(period);
        Self::from_i64(a0, &q, Tail::Periodic { start: pre.len() })
    }

    pub fn a0(&self) -> &BigInt {
        &self.a0
    }

    /// Stored quotients `a1, ..., ak` (for periodic expansions: preperiod then one period).
    pub fn stored(&self) -> &[BigInt] {
        &self.quotients
    }

    pub fn tail(&self) -> &Tail {
        &self.tail
    }

    pub fn is_prefix(&self) -> bool {
        self.tail == Tail::Prefix
    }

    pub fn is_periodic(&self) -> bool {
        matches!(self.tail, Tail::Periodic { .. })
    }

    pub fn preperiod(&self) -> &[BigInt] {
        match self.tail {
            Tail::Periodic { start } => &self.quotients[..start],
            _ => &self.quotients,
        }
    }

    pub fn period(&self) -> Option<&[BigInt]> {
        match self.tail {
            Tail::Periodic { start } => Some(&self.quotients[start..]),
            _ => None,
        }
    }

    /// Number of known quotients after `a0`; `None` when unbounded.
    pub fn known_len(&self) -> Option<usize> {
        match self.tail {
            Tail::Periodic { .. } => None,
            _ => Some(self.quotients.len()),
        }
    }

    /// `a_n`, or `None` past the known quotients.
    pub fn quotient(&self, n: usize) -> Option<BigInt> {
        if n == 0 {
            return Some(self.a0.clone());
        }
        let i = n - 1;
        match self.tail {
            Tail::Periodic { start } => {
                let idx = if i < self.quotients.len() {
                    i
                } else {
                    let plen = self.quotients.len() - start;
                    start + (i - start) % plen
                };
                Some(self.quotients[idx].clone())
            }
            _ => self.quotients.get(i).cloned(),
        }
    }

    /// `a_0, ..., a_n`.
    pub fn quotients_up_to(&self, n: usize) -> Result<Vec<BigInt>> {
        (0..=n)
            .map(|k| {
                self.quotient(k).ok_or(Error::IndexOutOfRange {
                    index: n as i64,
                    available: self.quotients.len(),
                })
            })
            .collect()
    }

    /// Convergent pair at index `n >= -1`.
    pub fn convergent(&self, n: i64) -> Result<ConvergentPair> {
        let out_of_range = Error::IndexOutOfRange {
            index: n,
            available: self.quotients.len(),
        };
        if n < -1 {
            return Err(out_of_range);
        }
        let mut cp = ConvergentPair::seed();
        for k in 0..=n {
            let a = self.quotient(k as usize).ok_or(out_of_range.clone())?;
            cp = cp.next(&a);
        }
        Ok(cp)
    }

    /// Lazily generated convergents from index 0.
    pub fn convergents(&self) -> impl Iterator<Item = ConvergentPair> + '_ {
        let mut cp = ConvergentPair::seed();
        let mut k = 0usize;
        std::iter::from_fn(move || {
            let a = self.quotient(k)?;
            cp = cp.next(&a);
            k += 1;
            Some(cp.clone())
        })
    }

    /// Exact value for terminating and periodic expansions.
    pub fn value(&self) -> Option<Quad> {
        match self.tail {
            Tail::Terminating => {
                let cp = self.convergent(self.quotients.len() as i64).ok()?;
                Some(Quad::rational(cp.value()))
            }
            Tail::Prefix => None,
            Tail::Periodic { start } => Some(self.periodic_value(start)),
        }
    }

    fn periodic_value(&self, start: usize) -> Quad {
        // y = [a_{start+1}; a_{start+2}, ...] solves y = (P y + P') / (Q y + Q')
        // where P/Q, P'/Q' are the last two convergents of one period.
        let period = &self.quotients[start..];
        let mut cp = ConvergentPair::seed();
        for a in period {
            cp = cp.next(a);
        }
        // Q y^2 + (Q' - P) y - P' = 0, positive root.
        let qa = cp.q.clone();
        let qb = &cp.q_prev - &cp.p;
        let qc = -cp.p_prev.clone();
        let disc = &qb * &qb - BigInt::from(4) * &qa * &qc;
        let y = Quad::from_parts(-qb, BigInt::one(), disc, BigInt::from(2) * qa)
            .expect("period discriminant is positive");
        // alpha = [a0; a1..a_start, y]
        let mut x = y;
        for a in self.quotients[..start].iter().rev() {
            x = x.recip().expect("nonzero tail").add_rational(&BigRational::from_integer(a.clone()));
        }
        x.recip()
            .expect("nonzero tail")
            .add_rational(&BigRational::from_integer(self.a0.clone()))
    }

    /// `alpha_n = [a_n; a_{n+1}, ...]` exactly, when the expansion determines it.
    pub fn tail_value(&self, n: usize) -> Option<Quad> {
        let v = self.value()?;
        let mut x = v;
        for _ in 0..n {
            let a = x.floor();
            let frac = x.add_rational(&-BigRational::from_integer(a));
            x = frac.recip().ok()?;
        }
        Some(x)
    }

    /// `beta_n = q_{n-2}/q_{n-1} = [0; a_{n-1}, ..., a_1]` for `n >= 1`.
    pub fn transposed_prefix(&self, n: usize) -> Result<BigRational> {
        let cp = self.convergent(n as i64 - 1)?;
        Ok(BigRational::new(cp.q_prev, cp.q))
    }

    /// Certified enclosure of the value from the first `n` quotients.
    pub fn enclosure(&self, n: usize) -> Result<BoundedValue> {
        if let Some(v) = self.value() {
            if v.is_rational() {
                return Ok(BoundedValue::point(v.a().clone()));
            }
        }
        let n = match self.known_len() {
            Some(len) => n.min(len),
            None => n,
        };
        Ok(self.convergent(n as i64)?.cylinder())
    }

    /// The deepest enclosure the stored data allows (periodic: `depth` quotients).
    pub fn best_enclosure(&self, depth: usize) -> BoundedValue {
        let n = self.known_len().unwrap_or(depth);
        self.enclosure(n).expect("index within range")
    }
}

/// Canonical expansion of a rational or quadratic surd.
///
/// Rationals use the Euclidean algorithm; surds iterate the Gauss map exactly
/// and stop at the first repeated complete quotient. When more than
/// `max_terms` quotients would be needed the result is a flagged prefix.
pub fn cf_expand(x: &Quad, max_terms: usize) -> Result<CfExpansion> {
    if max_terms == 0 {
        return Err(Error::InvalidInput("max_terms must be at least 1".into()));
    }
    if let Some(r) = x.as_rational() {
        return Ok(expand_rational(r, max_terms));
    }
    let mut seen: HashMap<Quad, usize> = HashMap::new();
    let mut digits: Vec<BigInt> = Vec::new();
    let mut cur = x.clone();
    loop {
        if let Some(&j) = seen.get(&cur) {
            let i = digits.len();
            let a0 = digits[0].clone();
            return if j == 0 {
                let mut q: Vec<BigInt> = digits[1..i].to_vec();
                q.push(a0.clone());
                CfExpansion::new(a0, q, Tail::Periodic { start: 0 })
            } else {
                CfExpansion::new(a0, digits[1..i].to_vec(), Tail::Periodic { start: j - 1 })
            };
        }
        if digits.len() > max_terms {
            let a0 = digits[0].clone();
            return CfExpansion::new(a0, digits[1..].to_vec(), Tail::Prefix);
        }
        seen.insert(cur.clone(), digits.len());
        let a = cur.floor();
        let frac = cur.add_rational(&-BigRational::from_integer(a.clone()));
        digits.push(a);
        cur = frac.recip()?;
    }
}

fn expand_rational(r: &BigRational, max_terms: usize) -> CfExpansion {
    let mut num = r.numer().clone();
    let mut den = r.denom().clone();
    let (a0, rem) = num.div_mod_floor(&den);
    num = den.clone();
    den = rem;
    let mut q = Vec::new();
    while !den.is_zero() {
        if q.len() == max_terms {
            return CfExpansion {
                a0,
                quotients: q,
                tail: Tail::Prefix,
            };
        }
        let (a, rem) = num.div_mod_floor(&den);
        q.push(a);
        num = den;
        den = rem;
    }
    CfExpansion {
        a0,
        quotients: q,
        tail: Tail::Terminating,
    }
}

/// Leading partial quotients of pi.
pub const PI_QUOTIENTS: [u32; 60] = [
    3, 7, 15, 1, 292, 1, 1, 1, 2, 1, 3, 1, 14, 2, 1, 1, 2, 2, 2, 2, 1, 84, 2, 1, 1, 15, 3, 13, 1, 4,
    2, 6, 6, 99, 1, 2, 2, 6, 3, 5, 1, 1, 6, 8, 1, 7, 1, 2, 3, 7, 1, 2, 1, 1, 12, 1, 1, 1, 3, 1,
];

/// The first `n + 1` quotients of pi as a flagged prefix.
pub fn pi_prefix(n: usize) -> CfExpansion {
    let n = n.min(PI_QUOTIENTS.len() - 1);
    CfExpansion {
        a0: BigInt::from(PI_QUOTIENTS[0]),
        quotients: PI_QUOTIENTS[1..=n].iter().map(|&a| BigInt::from(a)).collect(),
        tail: Tail::Prefix,
    }
}

fn join(xs: &[BigInt]) -> String {
    xs.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(",")
}

impl fmt::Display for CfExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pre = self.preperiod();
        write!(f, "[{}", self.a0)?;
        if !pre.is_empty() {
            write!(f, ";{}", join(pre))?;
        }
        if self.is_prefix() {
            if pre.is_empty() {
                write!(f, ";...")?;
            } else {
                write!(f, ",...")?;
            }
        }
        write!(f, "]")?;
        if let Some(p) = self.period() {
            write!(f, "~({})", join(p))?;
        }
        Ok(())
    }
}

impl FromStr for CfExpansion {
    type Err = Error;

    /// `[a0;a1,...,ak]`, optionally followed by `~(period)`; a trailing `...`
    /// or a `label:` in front (as in `pi:[3;7,15,1]`) marks a prefix.
    fn from_str(s: &str) -> Result<Self> {
        let err = || Error::parse("continued fraction", s);
        let t = s.trim();
        let (labelled, body) = match t.split_once(':') {
            Some((label, rest)) if !label.contains('[') => (true, rest.trim()),
            _ => (false, t),
        };
        let close = body.find(']').ok_or_else(err)?;
        let inner = body.strip_prefix('[').ok_or_else(err)?;
        let inner = &inner[..close - 1];
        let rest = body[close + 1..].trim();
        let period: Option<Vec<BigInt>> = if rest.is_empty() {
            None
        } else {
            let p = rest
                .strip_prefix('~')
                .map(str::trim)
                .and_then(|r| r.strip_prefix('('))
                .and_then(|r| r.strip_suffix(')'))
                .ok_or_else(err)?;
            Some(parse_list(p).ok_or_else(err)?.0)
        };
        let (head, tail_part) = match inner.split_once(';') {
            Some((h, t)) => (h, t),
            None => (inner, ""),
        };
        let a0: BigInt = head.trim().parse().map_err(|_| err())?;
        let (mut quotients, ellipsis) = parse_list(tail_part).ok_or_else(err)?;
        match period {
            Some(p) => {
                if ellipsis || labelled || p.is_empty() {
                    return Err(err());
                }
                let start = quotients.len();
                quotients.extend(p);
                CfExpansion::new(a0, quotients, Tail::Periodic { start })
            }
            None => {
                let tail = if ellipsis || labelled {
                    Tail::Prefix
                } else {
                    Tail::Terminating
                };
                CfExpansion::new(a0, quotients, tail)
            }
        }
    }
}

fn parse_list(s: &str) -> Option<(Vec<BigInt>, bool)> {
    let mut out = Vec::new();
    let mut ellipsis = false;
    let s = s.trim();
    if s.is_empty() {
        return Some((out, false));
    }
    for part in s.split(',') {
        let part = part.trim();
        if ellipsis {
            return None;
        }
        if part == "..." {
            ellipsis = true;
            continue;
        }
        out.push(part.parse().ok()?);
    }
    Some((out, ellipsis))
}

/// Small helper for tests and callers holding machine integers.
pub fn to_i64_vec(xs: &[BigInt]) -> Vec<i64> {
    xs.iter().map(|a| a.to_i64().expect("quotient fits in i64")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rational::rat;

    fn q(s: &str) -> Quad {
        s.parse().unwrap()
    }

    #[test]
    fn rational_expansions_are_canonical() {
        let cf = cf_expand(&Quad::rational(rat(355, 113)), 50).unwrap();
        assert_eq!(cf.to_string(), "[3;7,16]");
        assert_eq!(cf_expand(&Quad::from_int(7), 5).unwrap().to_string(), "[7]");
        let parsed: CfExpansion = "[3;7,15,1]".parse().unwrap();
        assert_eq!(parsed.to_string(), "[3;7,16]");
        let cf = cf_expand(&Quad::rational(rat(-7, 3)), 5).unwrap();
        assert_eq!(cf.to_string(), "[-3;1,2]");
        assert_eq!(cf.value().unwrap(), Quad::rational(rat(-7, 3)));
    }

    #[test]
    fn surd_periods_are_detected() {
        let phi = cf_expand(&q("(1+sqrt(5))/2"), 50).unwrap();
        assert_eq!(phi.to_string(), "[1]~(1)");
        let s2 = cf_expand(&q("sqrt(2)"), 50).unwrap();
        assert_eq!(s2.to_string(), "[1]~(2)");
        let s7 = cf_expand(&q("sqrt(7)"), 50).unwrap();
        assert_eq!(s7.to_string(), "[2]~(1,1,1,4)");
        let silver = cf_expand(&q("1+sqrt(2)"), 50).unwrap();
        assert_eq!(silver.to_string(), "[2]~(2)");
        let x = q("(3+sqrt(21))/6");
        let cf = cf_expand(&x, 50).unwrap();
        assert_eq!(cf.value().unwrap(), x);
        assert_eq!(phi.value().unwrap(), q("(1+sqrt(5))/2"));
    }

    #[test]
    fn long_period_truncates_to_prefix() {
        let cf = cf_expand(&q("sqrt(94)"), 5).unwrap();
        assert!(cf.is_prefix());
        assert_eq!(cf.stored().len(), 5);
    }

    #[test]
    fn text_format_round_trips() {
        for s in ["[1]~(1)", "[0;2,1]~(3,4)", "[3;7,15,1,...]", "[2;3]", "[5]"] {
            let cf: CfExpansion = s.parse().unwrap();
            assert_eq!(cf.to_string(), s);
        }
        let pi: CfExpansion = "pi:[3;7,15,1]".parse().unwrap();
        assert!(pi.is_prefix());
        assert_eq!(pi.convergent(3).unwrap().value(), rat(355, 113));
        assert!("[3;0,2]".parse::<CfExpansion>().is_err());
        assert!("3;7".parse::<CfExpansion>().is_err());
    }

    #[test]
    fn convergents_follow_the_recursion() {
        let pi = pi_prefix(3);
        let vals: Vec<_> = (0..=3).map(|n| pi.convergent(n).unwrap().value()).collect();
        assert_eq!(vals, vec![rat(3, 1), rat(22, 7), rat(333, 106), rat(355, 113)]);
        let ones = CfExpansion::periodic(1, &[], &[1]).unwrap();
        assert_eq!(ones.convergent(5).unwrap().value(), rat(13, 8));
        let seed = ones.convergent(-1).unwrap();
        assert_eq!((seed.p.clone(), seed.q.clone()), (BigInt::one(), BigInt::zero()));
        assert!(pi.convergent(4).is_err());
        assert!(pi.convergent(-2).is_err());
    }

    #[test]
    fn determinant_signs() {
        let cf = CfExpansion::from_i64(2, &[3], Tail::Terminating).unwrap();
        let cp = cf.convergent(1).unwrap();
        assert_eq!(cp.determinant(), BigInt::from(1));
        assert_eq!(determinant_check(&cp).unwrap(), 1);
        assert_eq!(determinant_check(&ConvergentPair::seed()).unwrap(), 1);
        let pi = pi_prefix(10);
        for n in 0..=10 {
            determinant_check(&pi.convergent(n).unwrap()).unwrap();
        }
    }

    #[test]
    fn tails_and_transposed_prefixes() {
        let s2 = cf_expand(&q("sqrt(2)"), 10).unwrap();
        assert_eq!(s2.tail_value(1).unwrap(), q("1+sqrt(2)"));
        let cf = CfExpansion::from_i64(0, &[2, 1, 3], Tail::Terminating).unwrap();
        // beta_3 = q_1/q_2 = [0; a_2, a_1] = [0;1,2] = 2/3
        assert_eq!(cf.transposed_prefix(3).unwrap(), rat(2, 3));
    }
}
