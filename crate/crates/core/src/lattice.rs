//! Unimodular lattices in the plane: systoles, holonomy vectors, areas, and
//! the Lagrange value of `alpha` read off the lattice `u_{-alpha}(Z^2)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numeric::rational::int;
use crate::numeric::{BoundedValue, Quad};

/// The lattice `g(Z^2)`, `g = [[g11, g12], [g21, g22]]` with determinant 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice2 {
    g: [[Quad; 2]; 2],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HolonomyVector {
    pub re: Quad,
    pub im: Quad,
    /// The primitive integer vector it comes from.
    pub p: i64,
    pub q: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedBasis {
    pub b1: (Quad, Quad),
    pub b2: (Quad, Quad),
    /// `|b1|^2`, the squared systole.
    pub systole_sq: Quad,
    pub steps: usize,
}

fn dot(u: &(Quad, Quad), v: &(Quad, Quad)) -> Result<Quad> {
    u.0.checked_mul(&v.0)?.checked_add(&u.1.checked_mul(&v.1)?)
}

impl Lattice2 {
    pub fn new(g11: Quad, g12: Quad, g21: Quad, g22: Quad) -> Result<Self> {
        let det = g11.checked_mul(&g22)?.checked_sub(&g12.checked_mul(&g21)?)?;
        if det != Quad::from_int(1) {
            return Err(Error::InvalidInput(format!("determinant is {det}, not 1")));
        }
        Ok(Lattice2 {
            g: [[g11, g12], [g21, g22]],
        })
    }

    pub fn identity() -> Self {
        Self::new(Quad::from_int(1), Quad::from_int(0), Quad::from_int(0), Quad::from_int(1))
            .expect("unimodular")
    }

    /// `u_{-alpha}(Z^2)`, whose vectors are `(p - q alpha, q)`.
    pub fn unipotent(alpha: &Quad) -> Self {
        Self::new(Quad::from_int(1), -alpha.clone(), Quad::from_int(0), Quad::from_int(1))
            .expect("unimodular")
    }

    pub fn matrix(&self) -> &[[Quad; 2]; 2] {
        &self.g
    }

    /// `g * m` for an integer matrix `m`; the same lattice when `det m = 1`.
    pub fn change_basis(&self, m: [[i64; 2]; 2]) -> Result<Self> {
        let e = |i: usize, j: usize| -> Quad {
            let a = self.g[i][0].scale(&int(m[0][j]));
            let b = self.g[i][1].scale(&int(m[1][j]));
            a.checked_add(&b).expect("same field")
        };
        Self::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }

    pub fn holonomy(&self, p: i64, q: i64) -> Result<HolonomyVector> {
        if p.gcd(&q) != 1 {
            return Err(Error::InvalidInput(format!("({p},{q}) is not primitive")));
        }
        let (pr, qr) = (int(p), int(q));
        let re = self.g[0][0].scale(&pr).checked_add(&self.g[0][1].scale(&qr))?;
        let im = self.g[1][0].scale(&pr).checked_add(&self.g[1][1].scale(&qr))?;
        Ok(HolonomyVector { re, im, p, q })
    }

    /// Lagrange-Gauss reduction of the columns.
    pub fn reduce(&self) -> Result<ReducedBasis> {
        let mut b1 = (self.g[0][0].clone(), self.g[1][0].clone());
        let mut b2 = (self.g[0][1].clone(), self.g[1][1].clone());
        let mut n1 = dot(&b1, &b1)?;
        let mut n2 = dot(&b2, &b2)?;
        let mut steps = 0usize;
        loop {
            if n2 < n1 {
                std::mem::swap(&mut b1, &mut b2);
                std::mem::swap(&mut n1, &mut n2);
            }
            let mu = dot(&b1, &b2)?.checked_div(&n1)?;
            let m = mu.round();
            if m.is_zero() {
                break;
            }
            steps += 1;
            let mq = BigRational::from_integer(m);
            b2 = (
                b2.0.checked_sub(&b1.0.scale(&mq))?,
                b2.1.checked_sub(&b1.1.scale(&mq))?,
            );
            n2 = dot(&b2, &b2)?;
            if n1 <= n2 {
                break;
            }
        }
        Ok(ReducedBasis {
            b1,
            b2,
            systole_sq: n1,
            steps,
        })
    }

    /// Length of the shortest nonzero vector, enclosed to about `2^-bits`.
    pub fn systole(&self, bits: u32) -> Result<BoundedValue> {
        Ok(sqrt_enclosure(&self.reduce()?.systole_sq, bits))
    }
}

/// Enclosure of `sqrt(x)` for `x >= 0`.
pub fn sqrt_enclosure(x: &Quad, bits: u32) -> BoundedValue {
    let e = x.enclose(2 * bits + 8);
    let scale = BigInt::one() << (2 * bits as usize);
    let den = BigInt::one() << bits as usize;
    let lo_scaled = crate::numeric::rational::floor(&(e.lo() * BigRational::from_integer(scale.clone())));
    let hi_scaled = -crate::numeric::rational::floor(&(-(e.hi() * BigRational::from_integer(scale))));
    let lo = if lo_scaled.is_positive() { lo_scaled.sqrt() } else { BigInt::zero() };
    let mut hi = hi_scaled.clone().max(BigInt::zero()).sqrt();
    if &hi * &hi < hi_scaled {
        hi += 1;
    }
    BoundedValue::new(BigRational::new(lo, den.clone()), BigRational::new(hi, den)).expect("ordered")
}

/// `|Re v| |Im v|`.
pub fn area(v: &HolonomyVector) -> Quad {
    v.re.checked_mul(&v.im).expect("same field").abs()
}

/// Applies `g_t`-style scaling `(re, im) -> (lambda re, im / lambda)`.
pub fn diagonal_scale(v: &HolonomyVector, lambda: &BigRational) -> HolonomyVector {
    HolonomyVector {
        re: v.re.scale(lambda),
        im: v.im.scale(&(BigRational::one() / lambda)),
        p: v.p,
        q: v.q,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeEll {
    /// Largest `1/Area(v)` over `1 <= q <= q_max`.
    pub running_max: Quad,
    pub running_q: i64,
    /// Largest `1/Area(v)` over `q_lo <= q <= q_max`, `q_lo = floor(sqrt(q_max))`.
    pub tail_max: Quad,
    pub tail_q: i64,
    pub q_lo: i64,
    /// `tail_max` widened by `1/q_lo` on each side: where `l(alpha)` is expected.
    pub estimate: BoundedValue,
}

fn inverse_area(alpha: &Quad, q: i64) -> Option<Quad> {
    let qa = alpha.scale(&int(q));
    let p = qa.round();
    let p64 = p.to_i64()?;
    if p64.gcd(&q) != 1 {
        return None;
    }
    let d = qa.add_rational(&-BigRational::from_integer(p)).scale(&int(q)).abs();
    d.recip().ok()
}

/// `l(alpha) = limsup 1/Area(v)` over `v = (p - q alpha, q)`, scanning `q <= q_max`
/// with `p` the nearest integer to `q alpha` (other `p` only give smaller values).
pub fn lagrange_via_lattice(alpha: &Quad, q_max: i64) -> Result<LatticeEll> {
    if alpha.is_rational() {
        return Err(Error::InvalidInput("alpha must be irrational".into()));
    }
    if q_max < 4 {
        return Err(Error::InvalidInput("q_max must be at least 4".into()));
    }
    let af = alpha.to_f64();
    let q_lo = (q_max as f64).sqrt().floor() as i64;
    // float filter: only q with 1/Area close to the chunk's best are evaluated exactly
    let best_in = |range: std::ops::RangeInclusive<i64>| -> Option<(Quad, i64)> {
        let ranges: Vec<(i64, i64)> = {
            let (a, b) = (*range.start(), *range.end());
            let step = 4096;
            (0..)
                .map(|k| (a + k * step, (a + (k + 1) * step - 1).min(b)))
                .take_while(|(s, _)| *s <= b)
                .collect()
        };
        ranges
            .into_par_iter()
            .filter_map(|(s, e)| {
                let vals: Vec<(f64, i64)> = (s..=e)
                    .map(|q| {
                        let x = q as f64 * af;
                        if (x.round() as i64).gcd(&q) != 1 {
                            return (0.0, q);
                        }
                        (1.0 / (q as f64 * (x - x.round()).abs()), q)
                    })
                    .collect();
                let top = vals.iter().map(|v| v.0).fold(0.0, f64::max);
                vals.iter()
                    .filter(|v| v.0 >= top * (1.0 - 1e-6))
                    .filter_map(|&(_, q)| inverse_area(alpha, q).map(|v| (v, q)))
                    .max_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)))
            })
            .collect::<Vec<_>>()
            .into_iter()
            .max_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)))
    };
    let (running_max, running_q) = best_in(1..=q_max).ok_or_else(|| Error::InvalidInput("empty scan".into()))?;
    let (tail_max, tail_q) = best_in(q_lo..=q_max).ok_or_else(|| Error::InvalidInput("empty scan".into()))?;
    let delta = BigRational::new(BigInt::one(), BigInt::from(q_lo));
    let estimate = crate::spectrum::enclose_to(&tail_max, &(&delta / int(16))).widen(&delta);
    Ok(LatticeEll {
        running_max,
        running_q,
        tail_max,
        tail_q,
        q_lo,
        estimate,
    })
}

/// `(s, t, alpha)` with `X = h_s g_t u_{-alpha}(Z^2)`, in floating point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Decomposition {
    pub s: f64,
    pub t: f64,
    pub alpha: f64,
}

impl Decomposition {
    /// The matrix `h_s g_t u_{-alpha}`.
    pub fn matrix(&self) -> [[f64; 2]; 2] {
        let (et, emt) = (self.t.exp(), (-self.t).exp());
        // h_s g_t = [[e^t, 0], [s e^t, e^-t]]; u_{-alpha} = [[1, -alpha], [0, 1]]
        [
            [et, -et * self.alpha],
            [self.s * et, -self.s * et * self.alpha + emt],
        ]
    }
}

pub fn decompose(x: &Lattice2) -> Result<Decomposition> {
    let f = |i: usize, j: usize| x.g[i][j].to_f64();
    // -g spans the same lattice; pick the sign with cos(theta) > 0
    let sign = if f(0, 0) < 0.0 { -1.0 } else { 1.0 };
    let (a, b, c, d) = (sign * f(0, 0), sign * f(0, 1), sign * f(1, 0), sign * f(1, 1));
    if a == 0.0 {
        return Err(Error::InvalidInput("lattice has a vertical holonomy vector".into()));
    }
    // g = h_s g_t r_theta: first row is e^t (cos, -sin)
    let et = a.hypot(b);
    let theta = (-b).atan2(a);
    let s = (c * theta.cos() - d * theta.sin()) / et;
    let t = et.ln();
    Ok(Decomposition {
        s: s + (-2.0 * t).exp() * theta.tan(),
        t: t + theta.cos().ln(),
        alpha: theta.tan(),
    })
}

/// True when `m^-1 g` is an integer matrix, i.e. both span the same lattice.
pub fn same_lattice(g: [[f64; 2]; 2], m: [[f64; 2]; 2], tol: f64) -> bool {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let inv = [[m[1][1] / det, -m[0][1] / det], [-m[1][0] / det, m[0][0] / det]];
    (0..2).all(|i| {
        (0..2).all(|j| {
            let v = inv[i][0] * g[0][j] + inv[i][1] * g[1][j];
            (v - v.round()).abs() < tol
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rational::rat;

    fn q(s: &str) -> Quad {
        s.parse().unwrap()
    }

    #[test]
    fn systole_examples() {
        let id = Lattice2::identity();
        assert_eq!(id.reduce().unwrap().systole_sq, Quad::from_int(1));
        let d = Lattice2::new(q("2"), q("0"), q("0"), q("1/2")).unwrap();
        assert_eq!(d.reduce().unwrap().systole_sq, q("1/4"));
        let e = d.systole(30).unwrap();
        assert!(e.contains(&rat(1, 2)));
        let skew = id.change_basis([[13, 8], [8, 5]]).unwrap();
        let r = skew.reduce().unwrap();
        assert_eq!(r.systole_sq, Quad::from_int(1));
        assert!(r.steps <= 8);
        assert!(Lattice2::new(q("2"), q("0"), q("0"), q("1")).is_err());
    }

    #[test]
    fn areas() {
        let d = Lattice2::new(q("3"), q("0"), q("0"), q("1/3")).unwrap();
        let v = d.holonomy(1, 1).unwrap();
        assert_eq!(area(&v), Quad::from_int(1));
        let w = diagonal_scale(&v, &rat(2, 1));
        assert_eq!(area(&w), area(&v));
        assert!(d.holonomy(2, 4).is_err());
    }

    #[test]
    fn golden_ratio_lattice() {
        let phi = q("(1+sqrt(5))/2");
        let r = lagrange_via_lattice(&phi, 10_000).unwrap();
        // convergent ratios alternate around sqrt(5)
        assert!(r.running_max > q("sqrt(5)"));
        assert!(r.estimate.contains_quad(&q("sqrt(5)")));
        let r = lagrange_via_lattice(&q("1+sqrt(2)"), 10_000).unwrap();
        assert!(r.estimate.contains_quad(&q("sqrt(8)")));
    }

    #[test]
    fn decomposition_recomposes() {
        let g = Lattice2::new(q("2"), q("1"), q("3"), q("2")).unwrap();
        let dcp = decompose(&g).unwrap();
        let gf = [[2.0, 1.0], [3.0, 2.0]];
        assert!(same_lattice(gf, dcp.matrix(), 1e-9));
        let u = Lattice2::unipotent(&q("sqrt(2)"));
        let du = decompose(&u).unwrap();
        assert!(du.s.abs() < 1e-12 && du.t.abs() < 1e-12);
        assert!((du.alpha - 2f64.sqrt()).abs() < 1e-12);
    }
}
