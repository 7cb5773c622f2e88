use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use super::biseq::BiSequence;
use crate::cf::{CfExpansion, ConvergentPair, Tail};
use crate::error::{Error, Result};
use crate::numeric::rational::{self, rat};
use crate::numeric::{BoundedValue, Quad};

/// Where the supremum (or limsup) was found.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Attained {
    /// A position of the sequence (in its own coordinates).
    Position(i64),
    /// Limit along the left period, at the given phase of the periodic orbit.
    LeftTail { phase: usize },
    /// Limit along the right period.
    RightTail { phase: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerronValue {
    pub value: BoundedValue,
    /// Exact value when it is a single quadratic surd.
    pub exact: Option<Quad>,
    pub attained: Attained,
}

/// Enclosure of `[a0; digits, anything]` (every continuation with quotients >= 1).
pub fn cylinder(a0: u64, digits: &[u64]) -> BoundedValue {
    let mut cp = ConvergentPair::seed().next(&BigInt::from(a0));
    for &d in digits {
        cp = cp.next(&BigInt::from(d));
    }
    cp.cylinder()
}

/// `f(sigma^n theta)` from `depth` letters on each side; width below `2 * 2^-(depth-1)`.
pub fn height_f(theta: &BiSequence, n: i64, depth: usize) -> Result<BoundedValue> {
    if depth < 2 {
        return Err(Error::InvalidInput("depth must be at least 2".into()));
    }
    let right = theta.window(n + 1, depth);
    let left: Vec<u64> = (1..=depth as i64).map(|k| theta.letter(n - k)).collect();
    Ok(cylinder(theta.letter(n), &right).add(&cylinder(0, &left)))
}

/// `[P_0; P_1, ..., P_{k-1}, P_0, ...]` exactly.
pub fn purely_periodic_value(period: &[u64]) -> Quad {
    let mut q: Vec<i64> = period[1..].iter().map(|&a| a as i64).collect();
    q.push(period[0] as i64);
    CfExpansion::from_i64(period[0] as i64, &q, Tail::Periodic { start: 0 })
        .expect("valid period")
        .value()
        .expect("periodic value")
}

/// `f` at each phase of the periodic orbit `... P P P ...`, phase `k` having
/// `P_k` at position 0. For `alpha = [P_k; P_{k+1}, ...]` the past
/// `[0; P_{k-1}, P_{k-2}, ...]` equals `-alpha'` (Galois), so `f = alpha - alpha'`.
pub fn periodic_orbit_values(period: &[u64]) -> Vec<Quad> {
    (0..period.len())
        .map(|k| {
            let mut rot = period.to_vec();
            rot.rotate_left(k);
            let a = purely_periodic_value(&rot);
            &a - &a.conj()
        })
        .collect()
}

/// Rational enclosure of `x` no wider than `w`.
pub fn enclose_to(x: &Quad, w: &BigRational) -> BoundedValue {
    let mut bits = (rational::to_f64(w).log2().abs().ceil() as u32).saturating_add(16);
    loop {
        let e = x.enclose(bits);
        if &e.width() <= w {
            return e;
        }
        bits += bits / 2 + 8;
    }
}

fn step_back(a: u64, next: &Quad) -> Quad {
    next.recip()
        .expect("complete quotients are positive")
        .add_rational(&rational::int(a as i64))
}

/// Exact right parts `X(j) = [a_j; a_{j+1}, ...]` and left parts
/// `Y(j) = [0; a_{j-1}, a_{j-2}, ...]` for raw indices `lo..=hi`.
fn exact_parts(theta: &BiSequence, lo: i64, hi: i64) -> (Vec<Quad>, Vec<Quad>) {
    let c = theta.core().len() as i64;
    let r = theta.right_period().len() as i64;
    let right_phase = |j: i64| {
        let mut rot = theta.right_period().to_vec();
        rot.rotate_left(((j - c) % r) as usize);
        purely_periodic_value(&rot)
    };
    let lrev: Vec<u64> = theta.left_period().iter().rev().copied().collect();
    let l = lrev.len() as i64;
    let left_phase = |j: i64| {
        // raw(j - 1 - k) = lrev[(k - j) mod l] for j <= 0
        let mut rot = lrev.clone();
        rot.rotate_left(((-j) % l) as usize);
        purely_periodic_value(&rot).recip().expect("positive")
    };
    let n = (hi - lo + 1) as usize;
    let mut xs: Vec<Option<Quad>> = vec![None; n];
    let start = hi.max(c);
    let mut x = right_phase(start);
    let mut j = start;
    loop {
        if j <= hi && j >= lo {
            xs[(j - lo) as usize] = Some(x.clone());
        }
        if j == lo {
            break;
        }
        j -= 1;
        x = if j >= c { right_phase(j) } else { step_back(theta.raw(j), &x) };
    }
    let mut ys = Vec::with_capacity(n);
    let first = lo.min(0);
    let mut y = left_phase(first);
    let mut j = first;
    loop {
        if j >= lo {
            ys.push(y.clone());
        }
        if j == hi {
            break;
        }
        j += 1;
        y = if j <= 0 {
            left_phase(j)
        } else {
            let prev = theta.raw(j - 1);
            y.add_rational(&rational::int(prev as i64))
                .recip()
                .expect("positive")
        };
    }
    (xs.into_iter().map(|v| v.expect("filled")).collect(), ys)
}

fn tail_depth(tol: &BigRational) -> i64 {
    // smallest K with 2^-K <= tol/4
    let t = rational::to_f64(tol) / 4.0;
    (-t.log2()).ceil().max(1.0) as i64 + 1
}

fn check_tol(tol: &BigRational) -> Result<()> {
    if !tol.is_positive() {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    Ok(())
}

fn max_quad(values: &[Quad]) -> (usize, Quad) {
    let mut best = 0;
    for (k, v) in values.iter().enumerate() {
        if v.cmp(&values[best]) == Ordering::Greater {
            best = k;
        }
    }
    (best, values[best].clone())
}

/// `m(theta) = sup_n f(sigma^n theta)` with enclosure width at most `tol`.
///
/// Positions within `K` letters of the core are evaluated exactly (as surds)
/// and enclosed; farther positions agree with the purely periodic orbit of
/// the adjacent period on at least `K` letters, so their values lie within
/// `2^-(K-1)` of that orbit's phase values.
pub fn markov_value(theta: &BiSequence, tol: &BigRational) -> Result<PerronValue> {
    check_tol(tol)?;
    let g = periodic_orbit_values(theta.right_period());
    let h = periodic_orbit_values(theta.left_period());
    let (gk, gmax) = max_quad(&g);
    let (hk, hmax) = max_quad(&h);
    let part_w = tol / rational::int(8);
    if theta.is_purely_periodic() {
        let value = enclose_to(&gmax, &(tol / rational::int(2)));
        return Ok(PerronValue {
            value,
            exact: Some(gmax),
            attained: Attained::RightTail { phase: gk },
        });
    }
    let k = tail_depth(tol);
    let c = theta.core().len() as i64;
    let (lo_w, hi_w) = (-(k + 1), c + k);
    let (xs, ys) = exact_parts(theta, lo_w, hi_w);
    // deviation beyond the window: 2^-K
    let dev = BigRational::new(BigInt::one(), BigInt::one() << (k as usize));
    let genc = enclose_to(&gmax, &part_w);
    let henc = enclose_to(&hmax, &part_w);
    let mut best_lo = genc.lo().clone();
    let mut best_hi = genc.hi() + &dev;
    let mut attained = Attained::RightTail { phase: gk };
    if henc.lo() > &best_lo {
        best_lo = henc.lo().clone();
        attained = Attained::LeftTail { phase: hk };
    }
    best_hi = best_hi.max(henc.hi() + &dev);
    for (i, (x, y)) in xs.iter().zip(&ys).enumerate() {
        let e = enclose_to(x, &part_w).add(&enclose_to(y, &part_w));
        if e.lo() > &best_lo {
            best_lo = e.lo().clone();
            attained = Attained::Position(lo_w + i as i64 - theta.origin());
        }
        if e.hi() > &best_hi {
            best_hi = e.hi().clone();
        }
    }
    Ok(PerronValue {
        value: BoundedValue::new(best_lo, best_hi)?,
        exact: None,
        attained,
    })
}

/// `l(theta) = limsup_{n -> +inf} f(sigma^n theta)`, the largest value of `f`
/// on the periodic orbit of the right period. Always exact.
pub fn lagrange_value(theta: &BiSequence, tol: &BigRational) -> Result<PerronValue> {
    check_tol(tol)?;
    let g = periodic_orbit_values(theta.right_period());
    let (k, gmax) = max_quad(&g);
    Ok(PerronValue {
        value: enclose_to(&gmax, tol),
        exact: Some(gmax),
        attained: Attained::RightTail { phase: k },
    })
}

/// `l(alpha)` for an irrational quadratic surd: the largest `f` on the
/// periodic orbit of its continued fraction period.
pub fn lagrange_of_surd(alpha: &Quad, tol: &BigRational) -> Result<PerronValue> {
    if alpha.is_rational() {
        return Err(Error::InvalidInput("alpha must be irrational".into()));
    }
    let cf = crate::cf::cf_expand(alpha, 100_000)?;
    let period: Vec<u64> = cf
        .period()
        .ok_or_else(|| Error::InvalidInput("no period found".into()))?
        .iter()
        .map(|a| a.try_into().expect("positive partial quotient"))
        .collect();
    lagrange_value(&BiSequence::periodic(&period)?, tol)
}

/// Compares `m(theta1)` and `m(theta2)`, refining tolerances down to `min_tol`.
/// At the cap, shifts of the same sequence are declared equal; anything else
/// still overlapping is reported as undecided.
pub fn compare_markov(
    theta1: &BiSequence,
    theta2: &BiSequence,
    min_tol: &BigRational,
) -> Result<Ordering> {
    let mut tol = rat(1, 1000);
    loop {
        let a = markov_value(theta1, &tol)?;
        let b = markov_value(theta2, &tol)?;
        if let (Some(x), Some(y)) = (&a.exact, &b.exact) {
            return Ok(x.cmp(y));
        }
        if a.value.hi() < b.value.lo() {
            return Ok(Ordering::Less);
        }
        if b.value.hi() < a.value.lo() {
            return Ok(Ordering::Greater);
        }
        if &tol <= min_tol {
            let w = 4 * (theta1.core().len() + theta2.core().len() + 8);
            let same = (-(w as i64)..=w as i64)
                .any(|s| theta1.window(-(w as i64), 2 * w) == theta2.shift(s).window(-(w as i64), 2 * w));
            return if same {
                Ok(Ordering::Equal)
            } else {
                Err(Error::Undecided("Markov values agree to the depth cap".into()))
            };
        }
        tol /= rational::int(1 << 20);
    }
}

/// `(alpha - p_n/q_n) - (-1)^n / ((alpha_{n+1} + beta_{n+1}) q_n^2)`, exactly.
pub fn perron_identity_check(alpha: &Quad, n: usize) -> Result<Quad> {
    if alpha.is_rational() {
        return Err(Error::InvalidInput("alpha must be irrational".into()));
    }
    if n < 1 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    let mut x = alpha.clone();
    let mut cp = ConvergentPair::seed();
    for _ in 0..=n {
        let a = x.floor();
        cp = cp.next(&a);
        x = x
            .add_rational(&-BigRational::from_integer(a))
            .recip()?;
    }
    // x = alpha_{n+1}; cp holds p_n/q_n and p_{n-1}/q_{n-1}
    let beta = BigRational::new(cp.q_prev.clone(), cp.q.clone());
    let q2 = BigRational::from_integer(&cp.q * &cp.q);
    let sign = if n.is_multiple_of(2) { rational::int(1) } else { rational::int(-1) };
    let rhs = x.add_rational(&beta).scale(&q2).recip()?.scale(&sign);
    let lhs = alpha.add_rational(&-cp.value());
    lhs.checked_sub(&rhs)
}

/// Freiman's constant `4 + (253589820 + 283748 sqrt(462)) / 491993569`,
/// the left end of Hall's ray, about 4.5278295661.
///
/// The coefficient is sometimes misprinted as 283798, which gives 4.5278317506.
pub fn freiman_constant() -> Quad {
    Quad::from_parts(
        BigInt::from(4i64 * 491_993_569 + 253_589_820),
        BigInt::from(283_748),
        BigInt::from(462),
        BigInt::from(491_993_569),
    )
    .expect("valid surd")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(s: &str) -> BiSequence {
        s.parse().unwrap()
    }

    fn q(s: &str) -> Quad {
        s.parse().unwrap()
    }

    #[test]
    fn heights_of_constant_sequences() {
        let ones = seq("(1)*");
        let e = height_f(&ones, 0, 30).unwrap();
        assert!(e.contains_quad(&q("sqrt(5)")));
        assert!(e.width_f64() < 2.0 * 0.5f64.powi(29));
        let twos = seq("(2)*");
        assert!(height_f(&twos, 3, 20).unwrap().contains_quad(&q("sqrt(8)")));
        let theta = seq("(1)* 22 (1)*");
        assert!(height_f(&theta, 0, 30).unwrap().contains(&rational::int(3)));
    }

    #[test]
    fn periodic_orbit_values_match_floats() {
        for p in [vec![1u64], vec![2], vec![1, 2], vec![2, 2, 1, 1], vec![3, 1, 4]] {
            let theta = BiSequence::periodic(&p).unwrap();
            for (k, v) in periodic_orbit_values(&p).iter().enumerate() {
                let e = height_f(&theta, k as i64, 40).unwrap();
                assert!(e.contains_quad(v), "period {p:?} phase {k}");
            }
        }
    }

    #[test]
    fn markov_values_of_periodic_orbits() {
        let tol = rat(1, 1_000_000_000);
        let m1 = markov_value(&seq("(1)*"), &tol).unwrap();
        assert_eq!(m1.exact, Some(q("sqrt(5)")));
        let m2 = markov_value(&seq("(2)*"), &tol).unwrap();
        assert_eq!(m2.exact, Some(q("sqrt(8)")));
        let m3 = markov_value(&seq("(1)* 22 (1)*"), &tol).unwrap();
        assert!(m3.value.contains(&rational::int(3)));
        assert!(m3.value.width() <= tol);
    }

    #[test]
    fn freiman_sequences() {
        let tol = rat(1, 1_000_000_000);
        let s = seq("(221221122)* 11 (221122122)*");
        let m = markov_value(&s, &tol).unwrap();
        assert!(m.value.within_of(3.118120178, 1e-8), "{}", m.value);
        let l = lagrange_value(&s, &tol).unwrap();
        assert!(l.value.hi() < m.value.lo());
        let s_inf = seq("(2)* 121122212 (1122212)*");
        let m = markov_value(&s_inf, &tol).unwrap();
        assert!(m.value.within_of(3.293044265, 1e-8), "{}", m.value);
        let c = freiman_constant();
        assert!(enclose_to(&c, &tol).within_of(4.527829566, 1e-8));
        assert_eq!(c, q("(2221564096+283748*sqrt(462))/491993569"));
    }

    #[test]
    fn shift_invariance() {
        let tol = rat(1, 1_000_000);
        let s = seq("(2)* 121122212 (1122212)*");
        let a = markov_value(&s, &tol).unwrap();
        for n in [-7, -1, 3, 20] {
            let b = markov_value(&s.shift(n), &tol).unwrap();
            assert!(a.value.overlaps(&b.value));
        }
        assert_eq!(compare_markov(&s, &s.shift(5), &rat(1, 1 << 40)).unwrap(), Ordering::Equal);
        assert_eq!(
            compare_markov(&seq("(1)*"), &seq("(2)*"), &tol).unwrap(),
            Ordering::Less
        );
    }

    #[test]
    fn perron_identity_examples() {
        for (a, n) in [("(1+sqrt(5))/2", 3), ("sqrt(2)", 4), ("(3+sqrt(21))/6", 2)] {
            assert!(perron_identity_check(&q(a), n).unwrap().is_zero(), "{a}");
        }
    }
}
