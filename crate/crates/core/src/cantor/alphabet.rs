use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A finite primitive set of words: no word is a prefix of another.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WordAlphabet {
    words: Vec<Vec<u64>>,
}

impl WordAlphabet {
    pub fn new(words: Vec<Vec<u64>>) -> Result<Self> {
        if words.is_empty() {
            return Err(Error::InvalidInput("alphabet is empty".into()));
        }
        for w in &words {
            if w.is_empty() || w.contains(&0) {
                return Err(Error::InvalidInput(format!(
                    "words must be nonempty with positive letters: {w:?}"
                )));
            }
        }
        for (i, a) in words.iter().enumerate() {
            for (j, b) in words.iter().enumerate() {
                if i != j && b.starts_with(a) {
                    return Err(Error::NotPrimitive(format!(
                        "{} is a prefix of {}",
                        fmt_word(a),
                        fmt_word(b)
                    )));
                }
            }
        }
        Ok(WordAlphabet { words })
    }

    /// `{1, 2, ..., a}` as one-letter words, the alphabet of `C(a)`.
    pub fn letters_up_to(a: u64) -> Self {
        WordAlphabet::new((1..=a).map(|k| vec![k]).collect()).expect("primitive")
    }

    pub fn words(&self) -> &[Vec<u64>] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn min_letter(&self) -> u64 {
        self.words.iter().flatten().copied().min().expect("nonempty")
    }

    pub fn max_letter(&self) -> u64 {
        self.words.iter().flatten().copied().max().expect("nonempty")
    }

    /// Every word reversed; fails if the result is not primitive.
    pub fn transpose(&self) -> Result<Self> {
        WordAlphabet::new(
            self.words
                .iter()
                .map(|w| w.iter().rev().copied().collect())
                .collect(),
        )
    }

    /// All concatenations of `n` words, in lexicographic order of word indices.
    pub fn concatenations(&self, n: usize) -> Vec<Vec<u64>> {
        let mut out = vec![Vec::new()];
        for _ in 0..n {
            out = out
                .iter()
                .flat_map(|prefix| {
                    self.words.iter().map(move |w| {
                        let mut v = prefix.clone();
                        v.extend_from_slice(w);
                        v
                    })
                })
                .collect();
        }
        out
    }
}

pub fn fmt_word(w: &[u64]) -> String {
    w.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(".")
}

impl fmt::Display for WordAlphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.words.iter().map(|w| fmt_word(w)).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for WordAlphabet {
    type Err = Error;

    /// Comma-separated words with letters separated by dots: `"2.1,1.2.3"`.
    fn from_str(s: &str) -> Result<Self> {
        let words = s
            .split(',')
            .map(|w| {
                w.trim()
                    .split('.')
                    .map(|a| a.trim().parse::<u64>().map_err(|_| Error::parse("alphabet", s)))
                    .collect::<Result<Vec<u64>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        WordAlphabet::new(words)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_validates() {
        let b: WordAlphabet = "2.1,1.2.3".parse().unwrap();
        assert_eq!(b.words(), &[vec![2, 1], vec![1, 2, 3]]);
        assert_eq!(b.to_string(), "2.1,1.2.3");
        assert_eq!(b.transpose().unwrap().to_string(), "1.2,3.2.1");
        assert!(matches!("1,1.2".parse::<WordAlphabet>(), Err(Error::NotPrimitive(_))));
        assert!("1,x".parse::<WordAlphabet>().is_err());
        assert!("0".parse::<WordAlphabet>().is_err());
        // reversal can break primitivity
        let c: WordAlphabet = "1,2.1".parse().unwrap();
        assert!(c.transpose().is_err());
    }

    #[test]
    fn concatenations_count() {
        let b = WordAlphabet::letters_up_to(3);
        assert_eq!(b.concatenations(4).len(), 81);
        assert_eq!(b.concatenations(2)[5], vec![2, 3]);
    }
}
