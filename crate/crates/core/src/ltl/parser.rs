//! Recursive-descent parser for the ASCII LTL syntax.
//!
//! Precedence from weakest to strongest: `<->`, `->`, `|`, `&`, `U`/`R`,
//! then the unary operators `! X F G`. `<->` associates to the left,
//! `->`, `U` and `R` to the right.

use super::Ltl;
use crate::error::{Error, Result};

/// Which atom names a parse accepts.
#[derive(Clone, Copy, Debug)]
pub enum ApUniverse<'a> {
    /// Any identifier is an atom.
    Open,
    /// Only the listed names; anything else is [`Error::UnknownAtom`].
    Closed(&'a [String]),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    True,
    False,
    Not,
    Next,
    Eventually,
    Globally,
    Until,
    Release,
    And,
    Or,
    Implies,
    Iff,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let b = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i];
        let start = i;
        let two = |s: &str| text[i..].starts_with(s);
        let tok = if c.is_ascii_whitespace() {
            i += 1;
            continue;
        } else if two("<->") {
            i += 3;
            Tok::Iff
        } else if two("->") {
            i += 2;
            Tok::Implies
        } else if two("&&") || two("||") {
            i += 2;
            if c == b'&' {
                Tok::And
            } else {
                Tok::Or
            }
        } else if c.is_ascii_alphabetic() || c == b'_' {
            while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
            match &text[start..i] {
                "X" => Tok::Next,
                "F" => Tok::Eventually,
                "G" => Tok::Globally,
                "U" => Tok::Until,
                "R" => Tok::Release,
                "true" => Tok::True,
                "false" => Tok::False,
                w => Tok::Ident(w.to_string()),
            }
        } else {
            i += 1;
            match c {
                b'!' => Tok::Not,
                b'&' => Tok::And,
                b'|' => Tok::Or,
                b'(' => Tok::LParen,
                b')' => Tok::RParen,
                _ => {
                    return Err(Error::parse(
                        start,
                        format!("unexpected character `{}`", text[start..].chars().next().unwrap()),
                    ))
                }
            }
        };
        out.push((start, tok));
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    universe: ApUniverse<'a>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn iff(&mut self) -> Result<Ltl> {
        let mut lhs = self.implies()?;
        while self.eat(&Tok::Iff) {
            lhs = lhs.iff(self.implies()?);
        }
        Ok(lhs)
    }

    fn implies(&mut self) -> Result<Ltl> {
        let lhs = self.or()?;
        if self.eat(&Tok::Implies) {
            Ok(lhs.implies(self.implies()?))
        } else {
            Ok(lhs)
        }
    }

    fn or(&mut self) -> Result<Ltl> {
        let mut lhs = self.and()?;
        while self.eat(&Tok::Or) {
            lhs = lhs.or(self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Ltl> {
        let mut lhs = self.until()?;
        while self.eat(&Tok::And) {
            lhs = lhs.and(self.until()?);
        }
        Ok(lhs)
    }

    fn until(&mut self) -> Result<Ltl> {
        let lhs = self.unary()?;
        if self.eat(&Tok::Until) {
            Ok(lhs.until(self.until()?))
        } else if self.eat(&Tok::Release) {
            Ok(lhs.release(self.until()?))
        } else {
            Ok(lhs)
        }
    }

    fn unary(&mut self) -> Result<Ltl> {
        let at = self.offset();
        let Some(tok) = self.peek().cloned() else {
            return Err(Error::parse(at, "unexpected end of formula"));
        };
        self.pos += 1;
        match tok {
            Tok::Not => Ok(self.unary()?.not()),
            Tok::Next => Ok(self.unary()?.next()),
            Tok::Eventually => Ok(self.unary()?.eventually()),
            Tok::Globally => Ok(self.unary()?.globally()),
            Tok::True => Ok(Ltl::True),
            Tok::False => Ok(Ltl::False),
            Tok::Ident(name) => {
                if let ApUniverse::Closed(names) = self.universe {
                    if !names.contains(&name) {
                        return Err(Error::UnknownAtom(name));
                    }
                }
                Ok(Ltl::Atom(name))
            }
            Tok::LParen => {
                let inner = self.iff()?;
                if !self.eat(&Tok::RParen) {
                    return Err(Error::parse(self.offset(), "expected `)`"));
                }
                Ok(inner)
            }
            other => Err(Error::parse(at, format!("unexpected token {other:?}"))),
        }
    }
}

/// Parses an LTL formula.
pub fn parse_ltl(text: &str, universe: ApUniverse<'_>) -> Result<Ltl> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        end: text.len(),
        universe,
    };
    let f = p.iff()?;
    if p.pos < p.toks.len() {
        return Err(Error::parse(p.offset(), "unexpected trailing input"));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Ltl {
        parse_ltl(s, ApUniverse::Open).unwrap()
    }

    fn a(s: &str) -> Ltl {
        Ltl::atom(s)
    }

    #[test]
    fn simple_forms() {
        assert_eq!(p("F g0"), a("g0").eventually());
        assert_eq!(p("a U b U c"), a("a").until(a("b").until(a("c"))));
        assert_eq!(
            p("!((i2 U i0) <-> G F o4)"),
            a("i2").until(a("i0")).iff(a("o4").eventually().globally()).not()
        );
    }

    #[test]
    fn precedence() {
        assert_eq!(p("a | b & c"), a("a").or(a("b").and(a("c"))));
        assert_eq!(p("a -> b -> c"), a("a").implies(a("b").implies(a("c"))));
        assert_eq!(p("a <-> b <-> c"), a("a").iff(a("b")).iff(a("c")));
        assert_eq!(p("!a U b"), a("a").not().until(a("b")));
        assert_eq!(p("a & b U c"), a("a").and(a("b").until(a("c"))));
        assert_eq!(p("X X a R b"), a("a").next().next().release(a("b")));
        assert_eq!(p("y | F x"), a("y").or(a("x").eventually()));
    }

    #[test]
    fn errors_carry_positions() {
        match parse_ltl("a & (b | ", ApUniverse::Open) {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 9),
            other => panic!("{other:?}"),
        }
        match parse_ltl("a $ b", ApUniverse::Open) {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 2),
            other => panic!("{other:?}"),
        }
        let names = vec!["x".to_string()];
        assert!(matches!(
            parse_ltl("F y", ApUniverse::Closed(&names)),
            Err(Error::UnknownAtom(n)) if n == "y"
        ));
        assert!(parse_ltl("a b", ApUniverse::Open).is_err());
    }

    #[test]
    fn keywords_are_not_atoms() {
        assert!(parse_ltl("U", ApUniverse::Open).is_err());
        assert_eq!(p("Fx"), a("Fx"));
        assert_eq!(p("true U false"), Ltl::True.until(Ltl::False));
    }
}
