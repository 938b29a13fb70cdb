//! Propositional edge guards kept in disjunctive normal form.
//!
//! A [`Guard`] is a disjunction of [`Cube`]s over symbol indices `0..64`.
//! Existential quantification and renaming act cube-wise, which keeps the
//! projections of the synthesis pipeline exact without explicit letters.

use std::fmt;

use crate::alphabet::Letter;
use crate::error::{Error, Result};

/// A conjunction of literals: `pos` must hold, `neg` must not.
/// Invariant: `pos & neg == 0`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Cube {
    pub pos: u64,
    pub neg: u64,
}

impl Cube {
    pub const TOP: Cube = Cube { pos: 0, neg: 0 };

    pub fn literal(var: usize, positive: bool) -> Cube {
        if positive {
            Cube { pos: 1 << var, neg: 0 }
        } else {
            Cube { pos: 0, neg: 1 << var }
        }
    }

    /// The cube fixing every symbol of `mask` to its value in `letter`.
    pub fn exact(letter: Letter, mask: u64) -> Cube {
        Cube {
            pos: letter.0 & mask,
            neg: !letter.0 & mask,
        }
    }

    pub fn and(self, other: Cube) -> Option<Cube> {
        let c = Cube {
            pos: self.pos | other.pos,
            neg: self.neg | other.neg,
        };
        (c.pos & c.neg == 0).then_some(c)
    }

    pub fn admits(self, letter: Letter) -> bool {
        letter.0 & self.pos == self.pos && letter.0 & self.neg == 0
    }

    pub fn support(self) -> u64 {
        self.pos | self.neg
    }

    /// Every letter admitted by `self` is admitted by `other`.
    pub fn implies(self, other: Cube) -> bool {
        other.pos & !self.pos == 0 && other.neg & !self.neg == 0
    }

    fn map_vars(self, f: &impl Fn(usize) -> usize) -> Cube {
        let mut c = Cube::TOP;
        for v in bits(self.pos) {
            c.pos |= 1 << f(v);
        }
        for v in bits(self.neg) {
            c.neg |= 1 << f(v);
        }
        c
    }
}

pub(crate) fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let b = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(b)
        }
    })
}

/// A propositional formula in DNF. The empty disjunction is `false`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Guard {
    cubes: Vec<Cube>,
}

impl Guard {
    pub fn falsum() -> Guard {
        Guard { cubes: Vec::new() }
    }

    pub fn verum() -> Guard {
        Guard { cubes: vec![Cube::TOP] }
    }

    pub fn literal(var: usize, positive: bool) -> Guard {
        Guard {
            cubes: vec![Cube::literal(var, positive)],
        }
    }

    pub fn cube(c: Cube) -> Guard {
        Guard { cubes: vec![c] }
    }

    pub fn from_cubes(cubes: impl IntoIterator<Item = Cube>) -> Guard {
        Guard {
            cubes: simplify(cubes.into_iter().filter(|c| c.pos & c.neg == 0).collect()),
        }
    }

    pub fn cubes(&self) -> &[Cube] {
        &self.cubes
    }

    /// Syntactically false. Since every stored cube is consistent this is
    /// also the semantic check.
    pub fn is_false(&self) -> bool {
        self.cubes.is_empty()
    }

    /// Syntactically true (contains the empty cube).
    pub fn is_trivially_true(&self) -> bool {
        self.cubes.contains(&Cube::TOP)
    }

    pub fn is_tautology(&self) -> bool {
        self.is_trivially_true() || self.not().is_false()
    }

    pub fn admits(&self, letter: Letter) -> bool {
        self.cubes.iter().any(|c| c.admits(letter))
    }

    pub fn support(&self) -> u64 {
        self.cubes.iter().fold(0, |m, c| m | c.support())
    }

    /// Some admitted letter (the one setting only forced symbols).
    pub fn pick_letter(&self) -> Option<Letter> {
        self.cubes.first().map(|c| Letter(c.pos))
    }

    pub fn and(&self, other: &Guard) -> Guard {
        if self.is_trivially_true() {
            return other.clone();
        }
        if other.is_trivially_true() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.cubes.len() * other.cubes.len());
        for a in &self.cubes {
            for b in &other.cubes {
                if let Some(c) = a.and(*b) {
                    out.push(c);
                }
            }
        }
        Guard { cubes: simplify(out) }
    }

    pub fn and_cube(&self, c: Cube) -> Guard {
        Guard {
            cubes: simplify(self.cubes.iter().filter_map(|a| a.and(c)).collect()),
        }
    }

    pub fn or(&self, other: &Guard) -> Guard {
        if self.is_false() {
            return other.clone();
        }
        if other.is_false() {
            return self.clone();
        }
        let mut cubes = self.cubes.clone();
        cubes.extend_from_slice(&other.cubes);
        Guard { cubes: simplify(cubes) }
    }

    pub fn not(&self) -> Guard {
        Guard {
            cubes: simplify(negate(&self.cubes)),
        }
    }

    pub fn implies(&self, other: &Guard) -> bool {
        self.and(&other.not()).is_false()
    }

    pub fn equivalent(&self, other: &Guard) -> bool {
        self.implies(other) && other.implies(self)
    }

    pub fn intersects(&self, other: &Guard) -> bool {
        self.cubes
            .iter()
            .any(|a| other.cubes.iter().any(|b| a.and(*b).is_some()))
    }

    /// Existential quantification of every symbol in `mask`.
    pub fn exists(&self, mask: u64) -> Guard {
        Guard {
            cubes: simplify(
                self.cubes
                    .iter()
                    .map(|c| Cube {
                        pos: c.pos & !mask,
                        neg: c.neg & !mask,
                    })
                    .collect(),
            ),
        }
    }

    /// Substitutes the symbols of `mask` by their values in `values`.
    pub fn restrict(&self, mask: u64, values: Letter) -> Guard {
        let fixed = Cube::exact(values, mask);
        Guard {
            cubes: simplify(
                self.cubes
                    .iter()
                    .filter(|c| c.and(fixed).is_some())
                    .map(|c| Cube {
                        pos: c.pos & !mask,
                        neg: c.neg & !mask,
                    })
                    .collect(),
            ),
        }
    }

    /// Renames symbol `i` to `f(i)`; `f` must be injective on the support.
    pub fn map_vars(&self, f: impl Fn(usize) -> usize) -> Guard {
        Guard {
            cubes: simplify(self.cubes.iter().map(|c| c.map_vars(&f)).collect()),
        }
    }

    /// Formats with symbol names; `true`/`false` for constants.
    pub fn display_with<'a>(&'a self, name: impl Fn(usize) -> String + 'a) -> impl fmt::Display + 'a {
        DisplayGuard {
            guard: self,
            name: Box::new(name),
            top: "true",
            bottom: "false",
            and: " & ",
            or: " | ",
        }
    }

    /// HOA label syntax over symbol indices, e.g. `0&!1 | 2`.
    pub fn to_hoa(&self) -> String {
        DisplayGuard {
            guard: self,
            name: Box::new(|i| i.to_string()),
            top: "t",
            bottom: "f",
            and: "&",
            or: " | ",
        }
        .to_string()
    }
}

struct DisplayGuard<'a> {
    guard: &'a Guard,
    name: Box<dyn Fn(usize) -> String + 'a>,
    top: &'static str,
    bottom: &'static str,
    and: &'static str,
    or: &'static str,
}

impl fmt::Display for DisplayGuard<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.guard.cubes.is_empty() {
            return f.write_str(self.bottom);
        }
        let mut first_cube = true;
        for c in &self.guard.cubes {
            if !first_cube {
                f.write_str(self.or)?;
            }
            first_cube = false;
            if *c == Cube::TOP {
                f.write_str(self.top)?;
                continue;
            }
            let mut first = true;
            for v in bits(c.support()) {
                if !first {
                    f.write_str(self.and)?;
                }
                first = false;
                if c.neg >> v & 1 == 1 {
                    f.write_str("!")?;
                }
                f.write_str(&(self.name)(v))?;
            }
        }
        Ok(())
    }
}

fn negate(cubes: &[Cube]) -> Vec<Cube> {
    if cubes.is_empty() {
        return vec![Cube::TOP];
    }
    if cubes.contains(&Cube::TOP) {
        return Vec::new();
    }
    if cubes.len() == 1 {
        let c = cubes[0];
        return bits(c.pos)
            .map(|v| Cube::literal(v, false))
            .chain(bits(c.neg).map(|v| Cube::literal(v, true)))
            .collect();
    }
    // split on the most frequent variable
    let mut counts = [0u32; 64];
    for c in cubes {
        for v in bits(c.support()) {
            counts[v] += 1;
        }
    }
    let var = (0..64).max_by_key(|&v| counts[v]).unwrap();
    let mut out = Vec::new();
    for value in [true, false] {
        let cof: Vec<Cube> = cubes
            .iter()
            .filter(|c| {
                if value {
                    c.neg >> var & 1 == 0
                } else {
                    c.pos >> var & 1 == 0
                }
            })
            .map(|c| Cube {
                pos: c.pos & !(1 << var),
                neg: c.neg & !(1 << var),
            })
            .collect();
        let lit = Cube::literal(var, value);
        out.extend(simplify(negate(&cof)).into_iter().filter_map(|c| c.and(lit)));
    }
    out
}

/// Sorts, removes subsumed cubes and applies single-variable resolution
/// (`x∧C ∨ ¬x∧D` with `C ⊆ D` becomes `x∧C ∨ D`) until stable.
fn simplify(mut cubes: Vec<Cube>) -> Vec<Cube> {
    if cubes.len() <= 1 {
        return cubes;
    }
    loop {
        cubes.sort_unstable_by_key(|c| (c.support().count_ones(), c.pos, c.neg));
        cubes.dedup();
        if cubes[0] == Cube::TOP {
            return vec![Cube::TOP];
        }
        // drop cubes implied by an earlier (shorter) one
        let mut kept: Vec<Cube> = Vec::with_capacity(cubes.len());
        for c in cubes {
            if !kept.iter().any(|k| c.implies(*k)) {
                kept.push(c);
            }
        }
        cubes = kept;
        let mut changed = false;
        for i in 0..cubes.len() {
            for j in 0..cubes.len() {
                if i == j {
                    continue;
                }
                let (a, b) = (cubes[i], cubes[j]);
                let clash = (a.pos & b.neg) | (a.neg & b.pos);
                if clash.count_ones() != 1 {
                    continue;
                }
                let a_rest = Cube {
                    pos: a.pos & !clash,
                    neg: a.neg & !clash,
                };
                let b_rest = Cube {
                    pos: b.pos & !clash,
                    neg: b.neg & !clash,
                };
                if b_rest.implies(a_rest) {
                    cubes[j] = b_rest;
                    changed = true;
                }
            }
        }
        if !changed {
            return cubes;
        }
    }
}

/// Parses a Boolean expression with `!`, `&`, `|`, parentheses and the
/// given constant spellings. Atoms are resolved to symbol indices by
/// `resolve`.
pub fn parse_guard(
    text: &str,
    constants: &[(&str, bool)],
    mut resolve: impl FnMut(&str) -> Result<usize>,
) -> Result<Guard> {
    let tokens = tokenize(text)?;
    let mut p = ExprParser {
        tokens: &tokens,
        pos: 0,
        constants,
        resolve: &mut resolve,
        end: text.len(),
    };
    let g = p.or()?;
    if p.pos != tokens.len() {
        return Err(Error::parse(tokens[p.pos].0, "unexpected token"));
    }
    Ok(g)
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Atom(String),
    Not,
    And,
    Or,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'!' => {
                out.push((i, Tok::Not));
                i += 1;
            }
            b'&' => {
                out.push((i, Tok::And));
                i += if bytes.get(i + 1) == Some(&b'&') { 2 } else { 1 };
            }
            b'|' => {
                out.push((i, Tok::Or));
                i += if bytes.get(i + 1) == Some(&b'|') { 2 } else { 1 };
            }
            b'(' => {
                out.push((i, Tok::LParen));
                i += 1;
            }
            b')' => {
                out.push((i, Tok::RParen));
                i += 1;
            }
            c if c.is_ascii_alphanumeric() || c == b'_' || c == b'@' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_' || bytes[i] == b'@') {
                    i += 1;
                }
                out.push((start, Tok::Atom(text[start..i].to_string())));
            }
            _ => return Err(Error::parse(i, format!("unexpected character `{}`", c as char))),
        }
    }
    Ok(out)
}

struct ExprParser<'a, F> {
    tokens: &'a [(usize, Tok)],
    pos: usize,
    constants: &'a [(&'a str, bool)],
    resolve: &'a mut F,
    end: usize,
}

impl<F: FnMut(&str) -> Result<usize>> ExprParser<'_, F> {
    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |t| t.0)
    }

    fn or(&mut self) -> Result<Guard> {
        let mut g = self.and()?;
        while matches!(self.tokens.get(self.pos), Some((_, Tok::Or))) {
            self.pos += 1;
            g = g.or(&self.and()?);
        }
        Ok(g)
    }

    fn and(&mut self) -> Result<Guard> {
        let mut g = self.unary()?;
        while matches!(self.tokens.get(self.pos), Some((_, Tok::And))) {
            self.pos += 1;
            g = g.and(&self.unary()?);
        }
        Ok(g)
    }

    fn unary(&mut self) -> Result<Guard> {
        let at = self.offset();
        match self.tokens.get(self.pos).cloned() {
            Some((_, Tok::Not)) => {
                self.pos += 1;
                Ok(self.unary()?.not())
            }
            Some((_, Tok::LParen)) => {
                self.pos += 1;
                let g = self.or()?;
                match self.tokens.get(self.pos) {
                    Some((_, Tok::RParen)) => {
                        self.pos += 1;
                        Ok(g)
                    }
                    _ => Err(Error::parse(self.offset(), "expected `)`")),
                }
            }
            Some((_, Tok::Atom(name))) => {
                self.pos += 1;
                if let Some(&(_, v)) = self.constants.iter().find(|(n, _)| *n == name) {
                    return Ok(if v { Guard::verum() } else { Guard::falsum() });
                }
                let var = (self.resolve)(&name)?;
                Ok(Guard::literal(var, true))
            }
            _ => Err(Error::parse(at, "expected operand")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn eval_all(g: &Guard, n: usize) -> Vec<bool> {
        (0..1u64 << n).map(|l| g.admits(Letter(l))).collect()
    }

    fn arb_guard(nvars: usize) -> impl Strategy<Value = Guard> {
        prop::collection::vec(prop::collection::vec((0..nvars, any::<bool>()), 0..4), 0..5).prop_map(|cubes| {
            Guard::from_cubes(cubes.into_iter().filter_map(|lits| {
                lits.into_iter()
                    .try_fold(Cube::TOP, |c, (v, p)| c.and(Cube::literal(v, p)))
            }))
        })
    }

    proptest! {
        #[test]
        fn boolean_ops_match_truth_tables(a in arb_guard(4), b in arb_guard(4)) {
            let ta = eval_all(&a, 4);
            let tb = eval_all(&b, 4);
            let and = eval_all(&a.and(&b), 4);
            let or = eval_all(&a.or(&b), 4);
            let not = eval_all(&a.not(), 4);
            for i in 0..16 {
                prop_assert_eq!(and[i], ta[i] && tb[i]);
                prop_assert_eq!(or[i], ta[i] || tb[i]);
                prop_assert_eq!(not[i], !ta[i]);
            }
        }

        #[test]
        fn exists_matches_truth_table(a in arb_guard(4), mask in 0u64..16) {
            let e = a.exists(mask);
            for l in 0..16u64 {
                let expect = crate::alphabet::submasks(mask)
                    .any(|m| a.admits(Letter((l & !mask) | m)));
                prop_assert_eq!(e.admits(Letter(l)), expect);
            }
        }

        #[test]
        fn restrict_matches_substitution(a in arb_guard(4), mask in 0u64..16, vals in 0u64..16) {
            let r = a.restrict(mask, Letter(vals));
            for l in 0..16u64 {
                let sub = Letter((l & !mask) | (vals & mask));
                prop_assert_eq!(r.admits(Letter(l)), a.admits(sub));
            }
        }
    }

    #[test]
    fn tautologies_collapse() {
        let x = Guard::literal(0, true);
        assert!(x.or(&x.not()).is_trivially_true());
        let y = Guard::literal(1, true);
        let g = x.and(&y).or(&x.and(&y.not())).or(&x.not());
        assert!(g.is_tautology());
    }

    #[test]
    fn parse_and_print() {
        let names = ["x", "y", "e"];
        let resolve = |s: &str| {
            names
                .iter()
                .position(|n| *n == s)
                .ok_or_else(|| Error::UnknownAtom(s.into()))
        };
        let g = parse_guard("x & !y | (e)", &[("true", true), ("false", false)], resolve).unwrap();
        assert!(g.admits(Letter(0b001)));
        assert!(!g.admits(Letter(0b011)));
        assert!(g.admits(Letter(0b100)));
        assert_eq!(g.to_hoa(), "2 | 0&!1");
        assert!(parse_guard("x &", &[], resolve).is_err());
        assert!(matches!(parse_guard("q", &[], resolve), Err(Error::UnknownAtom(_))));
        let t = parse_guard("true", &[("true", true)], resolve).unwrap();
        assert!(t.is_trivially_true());
    }
}
