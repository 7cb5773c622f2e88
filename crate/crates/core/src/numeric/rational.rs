//! Exact rationals and their text format.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision fraction `p/q` in lowest terms with `q > 0`.
pub type ExactRational = BigRational;

pub fn rat(p: i64, q: i64) -> ExactRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(p: i64) -> ExactRational {
    BigRational::from_integer(BigInt::from(p))
}

pub fn from_big(p: BigInt) -> ExactRational {
    BigRational::from_integer(p)
}

/// `"p/q"`, always with an explicit denominator.
pub fn format_rational(x: &ExactRational) -> String {
    if x.is_integer() {
        return x.numer().to_string();
    }
    format!("{}/{}", x.numer(), x.denom())
}

/// Parses `"p/q"`, `"p"`, or a terminating decimal such as `"-3.25"` or `"1e-8"`.
///
/// Decimals are converted digit by digit, never through a float.
pub fn parse_rational(s: &str) -> Result<ExactRational> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::parse("rational", s));
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| Error::parse("rational", s))?;
        let q: BigInt = q.trim().parse().map_err(|_| Error::parse("rational", s))?;
        if q.is_zero() {
            return Err(Error::InvalidInput(format!("zero denominator in {s:?}")));
        }
        return Ok(BigRational::new(p, q));
    }
    parse_decimal(s)
}

fn parse_decimal(s: &str) -> Result<ExactRational> {
    let err = || Error::parse("decimal", s);
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => {
            let e: i64 = s[i + 1..].parse().map_err(|_| err())?;
            (&s[..i], e)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(err());
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let all: String = format!("{whole}{frac}");
    let mut value = BigRational::from_integer(all.parse::<BigInt>().map_err(|_| err())?);
    let shift = exponent - frac.len() as i64;
    let ten = BigRational::from_integer(BigInt::from(10));
    if shift >= 0 {
        value *= num_traits::pow(ten, shift as usize);
    } else {
        value /= num_traits::pow(ten, (-shift) as usize);
    }
    Ok(if negative { -value } else { value })
}

pub fn floor(x: &ExactRational) -> BigInt {
    x.numer().div_floor(x.denom())
}

pub fn to_f64(x: &ExactRational) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // Extremely large or tiny values: fall back to bit-length scaling.
        let n = x.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = x.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

/// Closest rational with denominator `2^bits` that is `<= x` (if `down`) or `>= x`.
pub fn round_dyadic(x: f64, bits: u32, down: bool) -> ExactRational {
    let scale = (1u64 << bits) as f64;
    let scaled = x * scale;
    let n = if down { scaled.floor() } else { scaled.ceil() };
    BigRational::new(BigInt::from(n as i64), BigInt::from(1u64 << bits))
}

pub fn abs(x: &ExactRational) -> ExactRational {
    x.abs()
}

pub fn is_integer(x: &ExactRational) -> bool {
    x.denom().is_one()
}
