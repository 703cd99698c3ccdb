use std::fmt;
use std::str::FromStr;

use super::StallingsError;

/// A letter of the free alphabet: `+k` is `a_k`, `-k` is `a_k^-1` (generators are 1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(i32);

impl Letter {
    pub fn generator(k: usize) -> Self {
        assert!(k >= 1, "generators are numbered from 1");
        Letter(k as i32)
    }

    pub fn from_signed(k: i32) -> Option<Self> {
        (k != 0).then_some(Letter(k))
    }

    pub fn signed(self) -> i32 {
        self.0
    }

    /// 1-based generator index.
    pub fn index(self) -> usize {
        self.0.unsigned_abs() as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 < 0
    }

    pub fn inverse(self) -> Self {
        Letter(-self.0)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_inverse() {
            write!(f, "b{}", self.index())
        } else {
            write!(f, "a{}", self.index())
        }
    }
}

impl FromStr for Letter {
    type Err = StallingsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || StallingsError::BadToken(s.to_string());
        let (sign, digits) = match s.as_bytes().first() {
            Some(b'a') => (1, &s[1..]),
            Some(b'b') => (-1, &s[1..]),
            _ => return Err(bad()),
        };
        let k: i32 = digits.parse().map_err(|_| bad())?;
        if k < 1 {
            return Err(bad());
        }
        Ok(Letter(sign * k))
    }
}

/// A word over the free alphabet.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Free reduction of `letters`.
    pub fn reduced(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|w| w[1] != w[0].inverse())
    }

    pub fn inverse(&self) -> Self {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = StallingsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.split_whitespace()
            .map(str::parse)
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn letters_render_and_parse() {
        let a2 = Letter::generator(2);
        assert_eq!(a2.to_string(), "a2");
        assert_eq!(a2.inverse().to_string(), "b2");
        assert_eq!("b3".parse::<Letter>().unwrap(), Letter::generator(3).inverse());
        assert!("c1".parse::<Letter>().is_err());
        assert!("a0".parse::<Letter>().is_err());
        assert!("a".parse::<Letter>().is_err());
    }

    #[test]
    fn free_reduction() {
        let a = Letter::generator(1);
        let b = Letter::generator(2);
        let w = Word::reduced([a, b, b.inverse(), a, a.inverse(), a.inverse()]);
        assert!(w.is_empty());
        let w: Word = "a1 a2 b1".parse().unwrap();
        assert!(w.is_reduced());
        assert!(!"a1 b1".parse::<Word>().unwrap().is_reduced());
        assert_eq!(w.inverse().to_string(), "a1 b2 b1");
    }
}
