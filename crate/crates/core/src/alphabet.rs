//! Ordered symbol sets and letters encoded as bitmasks.

use std::fmt;

use crate::error::{Error, Result};

/// Largest supported alphabet. Letters are stored as `u64` bitmasks.
pub const MAX_SYMBOLS: usize = 64;

/// A letter: the set of symbols that hold, bit `i` standing for symbol `i`
/// of the surrounding [`Alphabet`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Letter(pub u64);

impl Letter {
    pub const EMPTY: Letter = Letter(0);

    pub fn contains(self, symbol: usize) -> bool {
        self.0 >> symbol & 1 == 1
    }

    pub fn with(self, symbol: usize, value: bool) -> Letter {
        if value {
            Letter(self.0 | 1 << symbol)
        } else {
            Letter(self.0 & !(1 << symbol))
        }
    }

    pub fn restrict(self, mask: u64) -> Letter {
        Letter(self.0 & mask)
    }
}

/// An ordered, duplicate-free list of symbol names.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Alphabet {
    symbols: Vec<String>,
}

impl Alphabet {
    pub fn new<I, S>(symbols: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.len() > MAX_SYMBOLS {
            return Err(Error::TooManySymbols(symbols.len()));
        }
        for (i, s) in symbols.iter().enumerate() {
            if s.is_empty() {
                return Err(Error::InvalidArgument("empty symbol name".into()));
            }
            if symbols[..i].contains(s) {
                return Err(Error::NameCollision(s.clone()));
            }
        }
        Ok(Alphabet { symbols })
    }

    pub fn empty() -> Self {
        Alphabet::default()
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn name(&self, index: usize) -> &str {
        &self.symbols[index]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s == name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index_of(name).is_some()
    }

    /// Bitmask with one bit per symbol.
    pub fn full_mask(&self) -> u64 {
        low_mask(self.len())
    }

    /// Mask of the named symbols; unknown names are an error.
    pub fn mask_of<S: AsRef<str>>(&self, names: &[S]) -> Result<u64> {
        let mut mask = 0;
        for n in names {
            let i = self
                .index_of(n.as_ref())
                .ok_or_else(|| Error::UnknownAtom(n.as_ref().to_string()))?;
            mask |= 1 << i;
        }
        Ok(mask)
    }

    pub fn letter<S: AsRef<str>>(&self, names: &[S]) -> Result<Letter> {
        self.mask_of(names).map(Letter)
    }

    /// All `2^n` letters in increasing bitmask order.
    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        let n = self.len();
        assert!(n < 32, "explicit letter enumeration over {n} symbols");
        (0..1u64 << n).map(Letter)
    }

    pub fn format_letter(&self, letter: Letter) -> String {
        let names: Vec<&str> = (0..self.len())
            .filter(|&i| letter.contains(i))
            .map(|i| self.name(i))
            .collect();
        format!("{{{}}}", names.join(","))
    }

    /// Concatenation; names must stay distinct.
    pub fn extend<I, S>(&self, more: I) -> Result<Alphabet>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Alphabet::new(self.symbols.iter().cloned().chain(more.into_iter().map(Into::into)))
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.symbols.join(", "))
    }
}

pub(crate) fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Iterates over all submasks of `mask`, starting with `0`.
pub fn submasks(mask: u64) -> impl Iterator<Item = u64> {
    let mut next = Some(0u64);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == mask {
            None
        } else {
            Some((cur | !mask).wrapping_add(1) & mask)
        };
        Some(cur)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates() {
        assert!(matches!(Alphabet::new(["a", "b", "a"]), Err(Error::NameCollision(_))));
    }

    #[test]
    fn submask_enumeration_is_complete() {
        let m = 0b1011;
        let subs: Vec<u64> = submasks(m).collect();
        assert_eq!(subs.len(), 8);
        assert!(subs.iter().all(|s| s & !m == 0));
        assert_eq!(submasks(0).count(), 1);
    }

    #[test]
    fn letter_formatting() {
        let ab = Alphabet::new(["x", "y", "e"]).unwrap();
        let l = ab.letter(&["x", "e"]).unwrap();
        assert_eq!(ab.format_letter(l), "{x,e}");
        assert_eq!(ab.format_letter(Letter::EMPTY), "{}");
    }
}
