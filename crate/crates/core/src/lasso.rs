//! Ultimately periodic words `stem · cycle^ω`.

use crate::alphabet::{Alphabet, Letter};
use crate::error::{Error, Result};

/// A lasso-shaped infinite word: `stem` followed by `cycle` repeated forever.
///
/// Positions `0..len()` are the stored letters; the successor of the last
/// position wraps around to `loop_start()`. Two lassos may denote the same
/// infinite word with different splits, see [`LassoWord::canonical`].
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LassoWord {
    stem: Vec<Letter>,
    cycle: Vec<Letter>,
}

impl LassoWord {
    pub fn new(stem: Vec<Letter>, cycle: Vec<Letter>) -> Result<Self> {
        if cycle.is_empty() {
            return Err(Error::InvalidArgument("lasso loop must be nonempty".into()));
        }
        Ok(LassoWord { stem, cycle })
    }

    /// The word `letter^ω`.
    pub fn constant(letter: Letter) -> Self {
        LassoWord {
            stem: Vec::new(),
            cycle: vec![letter],
        }
    }

    pub fn stem(&self) -> &[Letter] {
        &self.stem
    }

    pub fn cycle(&self) -> &[Letter] {
        &self.cycle
    }

    /// Number of stored positions (stem plus one loop iteration).
    pub fn len(&self) -> usize {
        self.stem.len() + self.cycle.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn loop_start(&self) -> usize {
        self.stem.len()
    }

    /// Letter at a stored position `i < len()`.
    pub fn letter(&self, i: usize) -> Letter {
        if i < self.stem.len() {
            self.stem[i]
        } else {
            self.cycle[i - self.stem.len()]
        }
    }

    /// Letter at an arbitrary position of the infinite word.
    pub fn at(&self, i: usize) -> Letter {
        if i < self.stem.len() {
            self.stem[i]
        } else {
            self.cycle[(i - self.stem.len()) % self.cycle.len()]
        }
    }

    /// Successor of a stored position.
    pub fn succ(&self, i: usize) -> usize {
        if i + 1 < self.len() {
            i + 1
        } else {
            self.loop_start()
        }
    }

    /// Same word, stored with a stem of `stem_len` and a loop of
    /// `cycle_len` letters. `stem_len` must be at least the current stem
    /// length and `cycle_len` a multiple of the current loop length.
    pub fn unroll(&self, stem_len: usize, cycle_len: usize) -> LassoWord {
        assert!(stem_len >= self.stem.len());
        assert!(cycle_len > 0 && cycle_len.is_multiple_of(self.cycle.len()));
        LassoWord {
            stem: (0..stem_len).map(|i| self.at(i)).collect(),
            cycle: (stem_len..stem_len + cycle_len).map(|i| self.at(i)).collect(),
        }
    }

    /// Shortest-stem, shortest-loop representation. Two lassos denote the
    /// same infinite word iff their canonical forms are equal.
    pub fn canonical(&self) -> LassoWord {
        let n = self.cycle.len();
        let period = (1..=n)
            .find(|&p| n.is_multiple_of(p) && (0..n).all(|i| self.cycle[i] == self.cycle[i % p]))
            .unwrap_or(n);
        let mut stem = self.stem.clone();
        let mut cycle: Vec<Letter> = self.cycle[..period].to_vec();
        while let (Some(&s), Some(&c)) = (stem.last(), cycle.last()) {
            if s != c {
                break;
            }
            stem.pop();
            cycle.rotate_right(1);
        }
        LassoWord { stem, cycle }
    }

    pub fn same_word(&self, other: &LassoWord) -> bool {
        self.canonical() == other.canonical()
    }

    pub fn map_letters(&self, f: impl Fn(Letter) -> Letter) -> LassoWord {
        LassoWord {
            stem: self.stem.iter().map(|&l| f(l)).collect(),
            cycle: self.cycle.iter().map(|&l| f(l)).collect(),
        }
    }

    /// Restriction of every letter to the symbols in `mask`.
    pub fn project(&self, mask: u64) -> LassoWord {
        self.map_letters(|l| l.restrict(mask))
    }

    /// `self =_V other` for the symbol set `mask`, compared as infinite words.
    pub fn agrees_on(&self, other: &LassoWord, mask: u64) -> bool {
        self.project(mask).same_word(&other.project(mask))
    }

    /// Parses `{a};{};({a,b};{b})^w`.
    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<LassoWord> {
        LassoParser {
            text: text.as_bytes(),
            pos: 0,
            alphabet,
        }
        .parse()
    }

    pub fn display(&self, alphabet: &Alphabet) -> String {
        let mut out = String::new();
        for &l in &self.stem {
            out.push_str(&alphabet.format_letter(l));
            out.push(';');
        }
        out.push('(');
        let cyc: Vec<String> = self.cycle.iter().map(|&l| alphabet.format_letter(l)).collect();
        out.push_str(&cyc.join(";"));
        out.push_str(")^w");
        out
    }
}

/// Smallest common shape `(stem, loop)` able to store all given lassos.
pub fn common_shape<'a>(words: impl IntoIterator<Item = &'a LassoWord>) -> (usize, usize) {
    let mut stem = 0;
    let mut cycle = 1;
    for w in words {
        stem = stem.max(w.stem.len());
        cycle = lcm(cycle, w.cycle.len());
    }
    (stem, cycle)
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

struct LassoParser<'a> {
    text: &'a [u8],
    pos: usize,
    alphabet: &'a Alphabet,
}

impl LassoParser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.text.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::parse(self.pos, format!("expected `{}`", c as char)))
        }
    }

    fn letter(&mut self) -> Result<Letter> {
        self.expect(b'{')?;
        let mut letter = Letter::EMPTY;
        if self.peek() == Some(b'}') {
            self.pos += 1;
            return Ok(letter);
        }
        loop {
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.text.len()
                && (self.text[self.pos].is_ascii_alphanumeric() || matches!(self.text[self.pos], b'_' | b'@'))
            {
                self.pos += 1;
            }
            if start == self.pos {
                return Err(Error::parse(start, "expected proposition name"));
            }
            let name = std::str::from_utf8(&self.text[start..self.pos]).unwrap();
            let i = self
                .alphabet
                .index_of(name)
                .ok_or_else(|| Error::UnknownAtom(name.to_string()))?;
            letter = letter.with(i, true);
            match self.peek() {
                Some(b',') => self.pos += 1,
                Some(b'}') => {
                    self.pos += 1;
                    return Ok(letter);
                }
                _ => return Err(Error::parse(self.pos, "expected `,` or `}`")),
            }
        }
    }

    fn parse(mut self) -> Result<LassoWord> {
        let mut stem = Vec::new();
        loop {
            match self.peek() {
                Some(b'{') => {
                    stem.push(self.letter()?);
                    self.expect(b';')?;
                }
                Some(b'(') => break,
                _ => return Err(Error::parse(self.pos, "expected `{` or `(`")),
            }
        }
        self.expect(b'(')?;
        let mut cycle = vec![self.letter()?];
        while self.peek() == Some(b';') {
            self.pos += 1;
            cycle.push(self.letter()?);
        }
        self.expect(b')')?;
        self.expect(b'^')?;
        if !matches!(self.peek(), Some(b'w') | Some(b'W')) {
            return Err(Error::parse(self.pos, "expected `^w`"));
        }
        self.pos += 1;
        if self.peek().is_some() {
            return Err(Error::parse(self.pos, "trailing input after lasso"));
        }
        LassoWord::new(stem, cycle)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::new(["i0", "i2", "o4"]).unwrap()
    }

    #[test]
    fn parse_and_display() {
        let text = "{i2};{};{i0,o4};({i2,o4})^w";
        let w = LassoWord::parse(text, &ab()).unwrap();
        assert_eq!(w.len(), 4);
        assert_eq!(w.loop_start(), 3);
        assert_eq!(w.display(&ab()), text);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            LassoWord::parse("{zz};({})^w", &ab()),
            Err(Error::UnknownAtom(_))
        ));
        assert!(LassoWord::parse("{i0}", &ab()).is_err());
        assert!(LassoWord::parse("()^w", &ab()).is_err());
    }

    #[test]
    fn rotation_equivalence() {
        let x = Letter(1);
        let y = Letter(2);
        let a = LassoWord::new(vec![], vec![x, y]).unwrap();
        let b = LassoWord::new(vec![x], vec![y, x]).unwrap();
        let c = LassoWord::new(vec![x, y, x], vec![y, x, y, x]).unwrap();
        assert!(a.same_word(&b));
        assert!(a.same_word(&c));
        assert_eq!(c.canonical(), a);
        assert!(!a.same_word(&LassoWord::constant(x)));
    }

    #[test]
    fn unroll_preserves_word() {
        let w = LassoWord::new(vec![Letter(1)], vec![Letter(2), Letter(3)]).unwrap();
        let u = w.unroll(3, 4);
        assert_eq!(u.len(), 7);
        assert!(u.same_word(&w));
        for i in 0..20 {
            assert_eq!(u.at(i), w.at(i));
        }
    }
}
