//! Exact arithmetic in real quadratic fields `Q(sqrt(d))`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::enclosure::BoundedValue;
use super::rational::{self, ExactRational};
use crate::error::{Error, Result};

/// `a + b*sqrt(d)` with rational `a`, `b`.
///
/// Normal form: when `b == 0` the radicand is stored as 1; otherwise `d >= 2`
/// is not a perfect square and carries no square factor below 100.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quad {
    a: BigRational,
    b: BigRational,
    d: BigInt,
}

const SMALL_PRIMES: [u32; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

fn sign_i8(x: &BigRational) -> i8 {
    match x.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

fn ord_from_sign(s: i8) -> Ordering {
    s.cmp(&0)
}

impl Quad {
    pub fn rational(a: ExactRational) -> Self {
        Quad {
            a,
            b: BigRational::zero(),
            d: BigInt::one(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::rational(rational::int(n))
    }

    /// `a + b*sqrt(d)`; `d` must be positive.
    pub fn new(a: ExactRational, b: ExactRational, d: BigInt) -> Result<Self> {
        if !d.is_positive() {
            return Err(Error::InvalidInput(format!(
                "radicand must be positive, got {d}"
            )));
        }
        if b.is_zero() {
            return Ok(Self::rational(a));
        }
        let root = d.sqrt();
        if &root * &root == d {
            return Ok(Self::rational(a + b * BigRational::from_integer(root)));
        }
        let mut d = d;
        let mut b = b;
        for p in SMALL_PRIMES {
            let p2 = BigInt::from(p * p);
            while (&d % &p2).is_zero() {
                d /= &p2;
                b *= BigRational::from_integer(BigInt::from(p));
            }
        }
        Ok(Quad { a, b, d })
    }

    /// `(num + coef*sqrt(d)) / den` with integer parts.
    pub fn from_parts(num: BigInt, coef: BigInt, d: BigInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::InvalidInput("zero denominator in surd".into()));
        }
        Self::new(
            BigRational::new(num, den.clone()),
            BigRational::new(coef, den),
            d,
        )
    }

    pub fn sqrt_of(n: i64) -> Result<Self> {
        Self::new(BigRational::zero(), BigRational::one(), BigInt::from(n))
    }

    pub fn a(&self) -> &BigRational {
        &self.a
    }

    pub fn b(&self) -> &BigRational {
        &self.b
    }

    pub fn radicand(&self) -> &BigInt {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_rational().then_some(&self.a)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    fn common_field(&self, other: &Quad) -> Result<BigInt> {
        if self.is_rational() {
            Ok(other.d.clone())
        } else if other.is_rational() || self.d == other.d {
            Ok(self.d.clone())
        } else {
            Err(Error::InvalidInput(format!(
                "cannot combine elements of Q(sqrt({})) and Q(sqrt({}))",
                self.d, other.d
            )))
        }
    }

    fn build(a: BigRational, b: BigRational, d: BigInt) -> Self {
        if b.is_zero() {
            Self::rational(a)
        } else {
            Quad { a, b, d }
        }
    }

    pub fn checked_add(&self, other: &Quad) -> Result<Quad> {
        let d = self.common_field(other)?;
        Ok(Self::build(&self.a + &other.a, &self.b + &other.b, d))
    }

    pub fn checked_sub(&self, other: &Quad) -> Result<Quad> {
        let d = self.common_field(other)?;
        Ok(Self::build(&self.a - &other.a, &self.b - &other.b, d))
    }

    pub fn checked_mul(&self, other: &Quad) -> Result<Quad> {
        let d = self.common_field(other)?;
        let dr = BigRational::from_integer(d.clone());
        let a = &self.a * &other.a + &self.b * &other.b * dr;
        let b = &self.a * &other.b + &self.b * &other.a;
        Ok(Self::build(a, b, d))
    }

    pub fn checked_div(&self, other: &Quad) -> Result<Quad> {
        let inv = other.recip()?;
        self.checked_mul(&inv)
    }

    /// `a^2 - b^2 d`, the field norm.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - &self.b * &self.b * BigRational::from_integer(self.d.clone())
    }

    pub fn conj(&self) -> Quad {
        Self::build(self.a.clone(), -self.b.clone(), self.d.clone())
    }

    pub fn recip(&self) -> Result<Quad> {
        if self.is_zero() {
            return Err(Error::InvalidInput("division by zero".into()));
        }
        let n = self.norm();
        Ok(Self::build(&self.a / &n, -&self.b / &n, self.d.clone()))
    }

    pub fn scale(&self, k: &BigRational) -> Quad {
        Self::build(&self.a * k, &self.b * k, self.d.clone())
    }

    pub fn add_rational(&self, k: &BigRational) -> Quad {
        Self::build(&self.a + k, self.b.clone(), self.d.clone())
    }

    /// Exact sign of `a + b*sqrt(d)`.
    pub fn signum(&self) -> i8 {
        let sa = sign_i8(&self.a);
        let sb = sign_i8(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        // Opposite signs: compare a^2 with b^2 d.
        let a2 = &self.a * &self.a;
        let b2d = &self.b * &self.b * BigRational::from_integer(self.d.clone());
        match a2.cmp(&b2d) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    pub fn abs(&self) -> Quad {
        if self.signum() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    /// Exact floor.
    pub fn floor(&self) -> BigInt {
        if self.is_rational() {
            return rational::floor(&self.a);
        }
        // (A + B sqrt(d)) / c with c > 0.
        let c = self.a.denom().lcm(self.b.denom());
        let big_a = self.a.numer() * (&c / self.a.denom());
        let big_b = self.b.numer() * (&c / self.b.denom());
        let radicand = &big_b * &big_b * &self.d;
        let root = radicand.sqrt();
        // root^2 < radicand strictly because d is not a square.
        let floor_bsqrt = if big_b.is_positive() { root } else { -root - 1 };
        (big_a + floor_bsqrt).div_floor(&c)
    }

    /// Nearest integer, ties (impossible for irrationals) rounding up.
    pub fn round(&self) -> BigInt {
        self.add_rational(&rational::rat(1, 2)).floor()
    }

    pub fn to_f64(&self) -> f64 {
        let a = rational::to_f64(&self.a);
        if self.is_rational() {
            return a;
        }
        let d = rational::to_f64(&BigRational::from_integer(self.d.clone()));
        a + rational::to_f64(&self.b) * d.sqrt()
    }

    /// Rational enclosure of width at most about `|b| * 2^-bits`.
    pub fn enclose(&self, bits: u32) -> BoundedValue {
        if self.is_rational() {
            return BoundedValue::point(self.a.clone());
        }
        let scale = BigInt::one() << (2 * bits as usize);
        let s = (&self.d * scale).sqrt();
        let den = BigInt::one() << bits as usize;
        let lo_root = BigRational::new(s.clone(), den.clone());
        let hi_root = BigRational::new(s + 1, den);
        let x = &self.a + &self.b * &lo_root;
        let y = &self.a + &self.b * &hi_root;
        if x <= y {
            BoundedValue::new(x, y).expect("ordered")
        } else {
            BoundedValue::new(y, x).expect("ordered")
        }
    }

    /// `(A, B, d, c)` with `self = (A + B sqrt(d)) / c`, `c > 0`.
    pub fn integer_parts(&self) -> (BigInt, BigInt, BigInt, BigInt) {
        let c = self.a.denom().lcm(self.b.denom());
        let big_a = self.a.numer() * (&c / self.a.denom());
        let big_b = self.b.numer() * (&c / self.b.denom());
        (big_a, big_b, self.d.clone(), c)
    }

    /// Exact comparison, also across different quadratic fields.
    pub fn cmp_exact(&self, other: &Quad) -> Ordering {
        if let Ok(diff) = self.checked_sub(other) {
            return ord_from_sign(diff.signum());
        }
        // sign of A + B sqrt(d1) + C sqrt(d2), d1 != d2, B, C nonzero.
        let big_a = &self.a - &other.a;
        let big_b = self.b.clone();
        let big_c = -other.b.clone();
        let d1 = BigRational::from_integer(self.d.clone());
        let d2 = BigRational::from_integer(other.d.clone());
        let sb = sign_i8(&big_b);
        let sc = sign_i8(&big_c);
        let b2d1 = &big_b * &big_b * &d1;
        let c2d2 = &big_c * &big_c * &d2;
        let s_sign = if sb == sc {
            sb
        } else {
            match b2d1.cmp(&c2d2) {
                Ordering::Greater => sb,
                Ordering::Less => sc,
                Ordering::Equal => 0,
            }
        };
        let sa = sign_i8(&big_a);
        if sa == 0 {
            return ord_from_sign(s_sign);
        }
        if s_sign == 0 || s_sign == sa {
            return ord_from_sign(sa);
        }
        // |s| vs |A|: s^2 - A^2 = (B^2 d1 + C^2 d2 - A^2) + 2BC sqrt(d1 d2).
        let rat_part = b2d1 + c2d2 - &big_a * &big_a;
        let two = BigRational::from_integer(BigInt::from(2));
        let w = Quad::new(rat_part, two * &big_b * &big_c, &self.d * &other.d)
            .expect("positive radicand");
        match w.signum() {
            1 => ord_from_sign(s_sign),
            -1 => ord_from_sign(sa),
            _ => Ordering::Equal,
        }
    }

    pub fn cmp_rational(&self, r: &BigRational) -> Ordering {
        ord_from_sign(self.add_rational(&-r.clone()).signum())
    }
}

impl PartialOrd for Quad {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Quad {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_exact(other)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl<'a> $trait<&'a Quad> for &'a Quad {
            type Output = Quad;
            fn $method(self, rhs: &'a Quad) -> Quad {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $trait<Quad> for Quad {
            type Output = Quad;
            fn $method(self, rhs: Quad) -> Quad {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);
forward_binop!(Div, div, checked_div);

impl Neg for &Quad {
    type Output = Quad;
    fn neg(self) -> Quad {
        Quad::build(-self.a.clone(), -self.b.clone(), self.d.clone())
    }
}

impl Neg for Quad {
    type Output = Quad;
    fn neg(self) -> Quad {
        -&self
    }
}

impl From<BigRational> for Quad {
    fn from(r: BigRational) -> Self {
        Quad::rational(r)
    }
}

impl fmt::Display for Quad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", rational::format_rational(&self.a));
        }
        let (a, b, d, c) = self.integer_parts();
        let mut body = String::new();
        if !a.is_zero() {
            body.push_str(&a.to_string());
        }
        if b.is_negative() {
            body.push('-');
        } else if !a.is_zero() {
            body.push('+');
        }
        if !b.abs().is_one() {
            body.push_str(&format!("{}*", b.abs()));
        }
        body.push_str(&format!("sqrt({d})"));
        if c.is_one() {
            write!(f, "{body}")
        } else if a.is_zero() && !b.is_negative() {
            write!(f, "{body}/{c}")
        } else {
            write!(f, "({body})/{c}")
        }
    }
}

impl FromStr for Quad {
    type Err = Error;

    /// Accepts rationals, decimals and expressions such as `(1+sqrt(5))/2`,
    /// `sqrt(12)`, `(3+2*sqrt(21))/6` or `1+sqrt(2)`.
    fn from_str(s: &str) -> Result<Self> {
        let mut p = ExprParser {
            src: s.as_bytes(),
            pos: 0,
            input: s,
        };
        let v = p.sum()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(Error::parse("surd", s));
        }
        Ok(v)
    }
}

struct ExprParser<'a> {
    src: &'a [u8],
    pos: usize,
    input: &'a str,
}

impl ExprParser<'_> {
    fn err(&self) -> Error {
        Error::parse("surd", self.input)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn sum(&mut self) -> Result<Quad> {
        let mut acc = self.product()?;
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.pos += 1;
                    let rhs = self.product()?;
                    acc = acc.checked_add(&rhs)?;
                }
                b'-' => {
                    self.pos += 1;
                    let rhs = self.product()?;
                    acc = acc.checked_sub(&rhs)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<Quad> {
        let mut acc = self.factor()?;
        while let Some(c) = self.peek() {
            match c {
                b'*' => {
                    self.pos += 1;
                    let rhs = self.factor()?;
                    acc = acc.checked_mul(&rhs)?;
                }
                b'/' => {
                    self.pos += 1;
                    let rhs = self.factor()?;
                    acc = acc.checked_div(&rhs)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Quad> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.factor()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.factor()
            }
            Some(b'(') => {
                self.pos += 1;
                let v = self.sum()?;
                if self.peek() != Some(b')') {
                    return Err(self.err());
                }
                self.pos += 1;
                Ok(v)
            }
            Some(b's') => {
                if !self.src[self.pos..].starts_with(b"sqrt") {
                    return Err(self.err());
                }
                self.pos += 4;
                if self.peek() != Some(b'(') {
                    return Err(self.err());
                }
                self.pos += 1;
                let inner = self.sum()?;
                if self.peek() != Some(b')') {
                    return Err(self.err());
                }
                self.pos += 1;
                let r = inner.as_rational().ok_or_else(|| self.err())?;
                if !rational::is_integer(r) || !r.is_positive() {
                    return Err(Error::InvalidInput(format!(
                        "sqrt argument must be a positive integer in {:?}",
                        self.input
                    )));
                }
                Quad::new(BigRational::zero(), BigRational::one(), r.numer().clone())
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_digit() || self.src[self.pos] == b'.')
                {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).map_err(|_| self.err())?;
                Ok(Quad::rational(rational::parse_rational(text)?))
            }
            _ => Err(self.err()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rational::{int, rat};

    fn q(s: &str) -> Quad {
        s.parse().unwrap()
    }

    #[test]
    fn parses_common_forms() {
        let phi = q("(1+sqrt(5))/2");
        assert_eq!(phi.a(), &rat(1, 2));
        assert_eq!(phi.b(), &rat(1, 2));
        assert_eq!(phi.radicand(), &BigInt::from(5));
        assert_eq!(q("sqrt(12)"), q("2*sqrt(3)"));
        assert_eq!(q("sqrt(16)"), Quad::from_int(4));
        assert_eq!(q("355/113"), Quad::rational(rat(355, 113)));
        assert_eq!(q("(3+sqrt(21))/6"), q("1/2 + sqrt(21)/6"));
        assert!("sqrt(2)+sqrt(3)".parse::<Quad>().is_err());
        assert!("sqrt(-2)".parse::<Quad>().is_err());
        assert!("(1+sqrt(5)".parse::<Quad>().is_err());
    }

    #[test]
    fn display_round_trips() {
        for s in ["(1+sqrt(5))/2", "sqrt(12)", "(3-2*sqrt(21))/6", "7/3"] {
            let x = q(s);
            assert_eq!(x.to_string().parse::<Quad>().unwrap(), x);
        }
        assert_eq!(q("(1+sqrt(5))/2").to_string(), "(1+sqrt(5))/2");
        assert_eq!(q("sqrt(12)").to_string(), "2*sqrt(3)");
        assert_eq!(q("(4-sqrt(53))/2").to_string(), "(4-sqrt(53))/2");
    }

    #[test]
    fn golden_ratio_satisfies_its_equation() {
        let phi = q("(1+sqrt(5))/2");
        // phi^2 = phi + 1
        assert_eq!(&phi * &phi, phi.add_rational(&int(1)));
        assert_eq!(phi.recip().unwrap(), phi.add_rational(&int(-1)));
    }

    #[test]
    fn floor_and_sign_are_exact() {
        assert_eq!(q("sqrt(2)").floor(), BigInt::from(1));
        assert_eq!(q("-sqrt(2)").floor(), BigInt::from(-2));
        assert_eq!(q("(1+sqrt(5))/2").floor(), BigInt::from(1));
        assert_eq!(q("(1-sqrt(5))/2").floor(), BigInt::from(-1));
        assert_eq!(q("10-sqrt(99)").floor(), BigInt::from(0));
        assert_eq!(q("3-sqrt(9)").signum(), 0);
        assert_eq!(q("3-sqrt(8)").signum(), 1);
        assert_eq!(q("3-sqrt(10)").signum(), -1);
    }

    #[test]
    fn compares_across_fields() {
        // (6+sqrt(21))/3 ~ 3.5275 > sqrt(12) ~ 3.4641
        assert_eq!(q("(6+sqrt(21))/3").cmp(&q("sqrt(12)")), Ordering::Greater);
        assert_eq!(q("sqrt(2)+1").cmp(&q("sqrt(3)+1")), Ordering::Less);
        assert_eq!(q("sqrt(8)").cmp(&q("2*sqrt(2)")), Ordering::Equal);
        assert_eq!(q("1-sqrt(2)").cmp(&q("-sqrt(3)")), Ordering::Greater);
        assert_eq!(q("sqrt(2)+sqrt(2)").cmp(&q("sqrt(8)")), Ordering::Equal);
        // sqrt(2) + sqrt(3) ~ 3.1462 vs pi-ish rational
        let s = q("sqrt(2)").add_rational(&rat(0, 1));
        assert_eq!(s.cmp(&q("3/2 - sqrt(3)/100")), Ordering::Less);
    }

    #[test]
    fn enclosure_contains_value() {
        let x = q("(1+sqrt(5))/2");
        let e = x.enclose(40);
        assert!(e.contains_quad(&x));
        assert!(e.width_f64() < 1e-11);
        let y = q("-3*sqrt(7)");
        assert!(y.enclose(30).contains_quad(&y));
    }
}
