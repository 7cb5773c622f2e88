use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Eventually periodic bi-infinite sequence `... L L L core R R R ...`.
///
/// The left period is written in reading order and repeats toward `-inf`, so
/// the letter just before the core is the last letter of `left`. Internally
/// letters are addressed by raw index: the core occupies `0..core.len()`.
/// Position `n` of the sequence is raw index `n + origin`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BiSequence {
    left: Vec<u64>,
    core: Vec<u64>,
    right: Vec<u64>,
    origin: i64,
}

fn primitive_root(w: &[u64]) -> Vec<u64> {
    let n = w.len();
    for p in 1..=n {
        if n.is_multiple_of(p) && (p..n).all(|i| w[i] == w[i - p]) {
            return w[..p].to_vec();
        }
    }
    w.to_vec()
}

impl BiSequence {
    /// Builds and canonicalizes (primitive periods, core absorbed into the periods).
    pub fn new(left: Vec<u64>, core: Vec<u64>, right: Vec<u64>, origin: i64) -> Result<Self> {
        if left.is_empty() || right.is_empty() {
            return Err(Error::InvalidInput("periods must be nonempty".into()));
        }
        if left.iter().chain(&core).chain(&right).any(|&a| a == 0) {
            return Err(Error::InvalidInput("letters must be positive".into()));
        }
        let mut s = BiSequence {
            left: primitive_root(&left),
            core,
            right: primitive_root(&right),
            origin,
        };
        s.absorb();
        Ok(s)
    }

    /// `... P P P ...` with position 0 at the first letter of one copy of `P`.
    pub fn periodic(period: &[u64]) -> Result<Self> {
        Self::new(period.to_vec(), Vec::new(), period.to_vec(), 0)
    }

    fn absorb(&mut self) {
        while let Some(&last) = self.core.last() {
            if last != *self.right.last().expect("nonempty") {
                break;
            }
            self.core.pop();
            self.right.rotate_right(1);
        }
        while let Some(&first) = self.core.first() {
            if first != self.left[0] {
                break;
            }
            self.core.remove(0);
            self.left.rotate_left(1);
            self.origin -= 1;
        }
    }

    pub fn left_period(&self) -> &[u64] {
        &self.left
    }

    pub fn core(&self) -> &[u64] {
        &self.core
    }

    pub fn right_period(&self) -> &[u64] {
        &self.right
    }

    /// Raw index of position 0.
    pub fn origin(&self) -> i64 {
        self.origin
    }

    /// Letter at raw index `j`.
    pub fn raw(&self, j: i64) -> u64 {
        let c = self.core.len() as i64;
        if j >= c {
            let r = self.right.len() as i64;
            self.right[((j - c) % r) as usize]
        } else if j >= 0 {
            self.core[j as usize]
        } else {
            let l = self.left.len() as i64;
            self.left[(l - 1 - (-j - 1) % l) as usize]
        }
    }

    /// Letter at position `n`.
    pub fn letter(&self, n: i64) -> u64 {
        self.raw(n + self.origin)
    }

    /// `sigma^n(theta)`.
    pub fn shift(&self, n: i64) -> BiSequence {
        let mut s = self.clone();
        s.origin += n;
        s
    }

    /// Letters at positions `from..from+len`.
    pub fn window(&self, from: i64, len: usize) -> Vec<u64> {
        (0..len as i64).map(|k| self.letter(from + k)).collect()
    }

    pub fn max_letter(&self) -> u64 {
        self.left
            .iter()
            .chain(&self.core)
            .chain(&self.right)
            .copied()
            .max()
            .expect("nonempty")
    }

    /// True if the sequence is a single periodic orbit.
    pub fn is_purely_periodic(&self) -> bool {
        if !self.core.is_empty() || self.left.len() != self.right.len() {
            return false;
        }
        // ... L | R ...: periodic iff R followed by itself continues L's pattern,
        // i.e. raw(j) = raw(j + p) across the junction.
        let p = self.right.len() as i64;
        (-p..p).all(|j| self.raw(j) == self.raw(j + p))
    }
}

fn group_letters(s: &str) -> Result<Vec<u64>> {
    let s = s.trim();
    let err = || Error::parse("bi-sequence letters", s);
    if s.contains(',') {
        s.split(',')
            .map(|t| t.trim().parse::<u64>().map_err(|_| err()))
            .collect()
    } else {
        s.chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| c.to_digit(10).map(u64::from).ok_or_else(err))
            .collect()
    }
}

/// Core letters and the index marked by `^` (0 when unmarked).
fn parse_core(text: &str) -> Result<(Vec<u64>, i64)> {
    let err = || Error::parse("bi-sequence core", text);
    if text.matches('^').count() > 1 {
        return Err(err());
    }
    let tokens: Vec<String> = if text.contains(',') {
        text.split(',').map(|t| t.trim().to_string()).collect()
    } else {
        let mut out = Vec::new();
        let mut pending = String::new();
        for ch in text.chars().filter(|c| !c.is_whitespace()) {
            pending.push(ch);
            if ch != '^' {
                out.push(std::mem::take(&mut pending));
            }
        }
        if !pending.is_empty() {
            return Err(err());
        }
        out
    };
    let mut letters = Vec::new();
    let mut origin = 0;
    for tok in tokens.iter().filter(|t| !t.is_empty()) {
        let digits = match tok.strip_prefix('^') {
            Some(rest) => {
                origin = letters.len() as i64;
                rest
            }
            None => tok,
        };
        letters.push(digits.parse::<u64>().map_err(|_| err())?);
    }
    Ok((letters, origin))
}

impl FromStr for BiSequence {
    type Err = Error;

    /// `"(L)* core (R)*"`; a `^` in the core marks position 0 (default: first
    /// core letter). `"(P)*"` alone is the periodic orbit of `P`. Letters are
    /// single digits unless separated by commas.
    fn from_str(s: &str) -> Result<Self> {
        let err = || Error::parse("bi-sequence", s);
        let t = s.trim();
        let take_group = |t: &str| -> Result<(Vec<u64>, usize)> {
            let t0 = t.strip_prefix('(').ok_or_else(err)?;
            let close = t0.find(")*").ok_or_else(err)?;
            Ok((group_letters(&t0[..close])?, close + 3))
        };
        let (left, used) = take_group(t)?;
        let rest = t[used..].trim();
        if rest.is_empty() {
            return BiSequence::periodic(&left);
        }
        let open = rest.find('(').ok_or_else(err)?;
        let core_text = rest[..open].trim();
        let (right, used) = take_group(&rest[open..])?;
        if !rest[open + used..].trim().is_empty() {
            return Err(err());
        }
        let (core, origin) = parse_core(core_text)?;
        BiSequence::new(left, core, right, origin)
    }
}

fn write_letters(f: &mut fmt::Formatter<'_>, w: &[u64], comma: bool) -> fmt::Result {
    let sep = if comma { "," } else { "" };
    let parts: Vec<String> = w.iter().map(|a| a.to_string()).collect();
    write!(f, "{}", parts.join(sep))
}

impl fmt::Display for BiSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let comma = self.max_letter() >= 10;
        // Widen the printed core when position 0 lies in a periodic part, and
        // rotate the printed periods to stay adjacent to it.
        let c = self.core.len() as i64;
        let lo = self.origin.min(0);
        let hi = if self.origin >= c && !(c == 0 && self.origin == 0) {
            self.origin + 1
        } else {
            c
        };
        let l = self.left.len() as i64;
        let r = self.right.len() as i64;
        let left: Vec<u64> = (lo - l..lo).map(|j| self.raw(j)).collect();
        let right: Vec<u64> = (hi..hi + r).map(|j| self.raw(j)).collect();
        let shown: Vec<u64> = (lo..hi).map(|j| self.raw(j)).collect();
        let o = (self.origin - lo) as usize;
        write!(f, "(")?;
        write_letters(f, &left, comma)?;
        write!(f, ")* ")?;
        if o != 0 {
            write_letters(f, &shown[..o], comma)?;
            write!(f, "{}^", if comma { "," } else { "" })?;
            write_letters(f, &shown[o..], comma)?;
        } else {
            write_letters(f, &shown, comma)?;
        }
        if !shown.is_empty() {
            write!(f, " ")?;
        }
        write!(f, "(")?;
        write_letters(f, &right, comma)?;
        write!(f, ")*")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_freiman_sequence() {
        let s: BiSequence = "(221221122)* 11 (221122122)*".parse().unwrap();
        assert_eq!(s.letter(0), 1);
        assert_eq!(s.letter(1), 1);
        assert_eq!(s.letter(-1), 2);
        assert_eq!(s.letter(-3), 1);
        assert_eq!(s.letter(2), 2);
        assert_eq!(s.window(-9, 9), vec![2, 2, 1, 2, 2, 1, 1, 2, 2]);
        assert_eq!(s.window(2, 9), vec![2, 2, 1, 1, 2, 2, 1, 2, 2]);
    }

    #[test]
    fn canonicalizes_periods_and_core() {
        let a: BiSequence = "(11)* 1 (2)*".parse().unwrap();
        assert_eq!(a.left_period(), &[1]);
        assert!(a.core().is_empty());
        assert_eq!(a.letter(0), 1);
        assert_eq!(a.letter(1), 2);
        let b: BiSequence = "(1)* 22 (1)*".parse().unwrap();
        assert_eq!(b.core(), &[2, 2]);
        let c: BiSequence = "(12)* 1212 (12)*".parse().unwrap();
        assert!(c.is_purely_periodic());
        assert_eq!(c.window(0, 4), vec![1, 2, 1, 2]);
    }

    #[test]
    fn origin_marker_and_shift() {
        let s: BiSequence = "(1)* 2^2 (1)*".parse().unwrap();
        assert_eq!(s.window(-2, 4), vec![1, 2, 2, 1]);
        assert_eq!(s.shift(-1).letter(0), 2);
        assert_eq!(s.shift(1).letter(0), 1);
        let back: BiSequence = s.to_string().parse().unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn multi_digit_letters() {
        let s: BiSequence = "(1)* 12,3 (4,5)*".parse().unwrap();
        assert_eq!(s.window(0, 4), vec![12, 3, 4, 5]);
        assert_eq!(s.to_string(), "(1)* 12,3 (4,5)*");
        assert!("(0)*".parse::<BiSequence>().is_err());
        assert!("(1)* 2".parse::<BiSequence>().is_err());
    }

    #[test]
    fn display_round_trips_under_shifts() {
        for text in ["(221221122)* 11 (221122122)*", "(2)* 121122212 (1122212)*", "(1)* 12,3 (4,5)*", "(12)*"] {
            let s: BiSequence = text.parse().unwrap();
            for n in -12..15 {
                let t = s.shift(n);
                let back: BiSequence = t.to_string().parse().unwrap();
                assert_eq!(back.window(-30, 60), t.window(-30, 60), "{t}");
            }
        }
    }
}
