//! Linear temporal logic: syntax, evaluation on lassos, and translation
//! to Büchi automata.

mod eval;
mod parser;
mod translate;

use std::collections::BTreeSet;
use std::fmt;

pub use eval::eval_on_lasso;
pub use parser::{parse_ltl, ApUniverse};
pub use translate::ltl_to_nba;

/// LTL abstract syntax.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Ltl {
    True,
    False,
    Atom(String),
    Not(Box<Ltl>),
    And(Box<Ltl>, Box<Ltl>),
    Or(Box<Ltl>, Box<Ltl>),
    Implies(Box<Ltl>, Box<Ltl>),
    Iff(Box<Ltl>, Box<Ltl>),
    Next(Box<Ltl>),
    Until(Box<Ltl>, Box<Ltl>),
    Release(Box<Ltl>, Box<Ltl>),
    Eventually(Box<Ltl>),
    Globally(Box<Ltl>),
}

impl Ltl {
    pub fn atom(name: impl Into<String>) -> Ltl {
        Ltl::Atom(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Ltl {
        Ltl::Not(Box::new(self))
    }

    pub fn and(self, rhs: Ltl) -> Ltl {
        Ltl::And(Box::new(self), Box::new(rhs))
    }

    pub fn or(self, rhs: Ltl) -> Ltl {
        Ltl::Or(Box::new(self), Box::new(rhs))
    }

    pub fn implies(self, rhs: Ltl) -> Ltl {
        Ltl::Implies(Box::new(self), Box::new(rhs))
    }

    pub fn iff(self, rhs: Ltl) -> Ltl {
        Ltl::Iff(Box::new(self), Box::new(rhs))
    }

    pub fn until(self, rhs: Ltl) -> Ltl {
        Ltl::Until(Box::new(self), Box::new(rhs))
    }

    pub fn release(self, rhs: Ltl) -> Ltl {
        Ltl::Release(Box::new(self), Box::new(rhs))
    }

    pub fn next(self) -> Ltl {
        Ltl::Next(Box::new(self))
    }

    pub fn eventually(self) -> Ltl {
        Ltl::Eventually(Box::new(self))
    }

    pub fn globally(self) -> Ltl {
        Ltl::Globally(Box::new(self))
    }

    /// Conjunction of all formulas; `true` when empty.
    pub fn all(parts: impl IntoIterator<Item = Ltl>) -> Ltl {
        parts.into_iter().reduce(Ltl::and).unwrap_or(Ltl::True)
    }

    /// Disjunction of all formulas; `false` when empty.
    pub fn any(parts: impl IntoIterator<Item = Ltl>) -> Ltl {
        parts.into_iter().reduce(Ltl::or).unwrap_or(Ltl::False)
    }

    /// Atom names in order of first occurrence.
    pub fn atoms(&self) -> Vec<String> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        self.visit(&mut |f| {
            if let Ltl::Atom(a) = f {
                if seen.insert(a.clone()) {
                    out.push(a.clone());
                }
            }
        });
        out
    }

    fn visit(&self, f: &mut impl FnMut(&Ltl)) {
        f(self);
        match self {
            Ltl::True | Ltl::False | Ltl::Atom(_) => {}
            Ltl::Not(a) | Ltl::Next(a) | Ltl::Eventually(a) | Ltl::Globally(a) => a.visit(f),
            Ltl::And(a, b)
            | Ltl::Or(a, b)
            | Ltl::Implies(a, b)
            | Ltl::Iff(a, b)
            | Ltl::Until(a, b)
            | Ltl::Release(a, b) => {
                a.visit(f);
                b.visit(f);
            }
        }
    }

    /// Number of operator nesting levels; atoms and constants have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Ltl::True | Ltl::False | Ltl::Atom(_) => 0,
            Ltl::Not(a) | Ltl::Next(a) | Ltl::Eventually(a) | Ltl::Globally(a) => 1 + a.depth(),
            Ltl::And(a, b)
            | Ltl::Or(a, b)
            | Ltl::Implies(a, b)
            | Ltl::Iff(a, b)
            | Ltl::Until(a, b)
            | Ltl::Release(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    /// Negation normal form over `true, false, a, !a, &, |, X, U, R`.
    pub fn to_nnf(&self) -> Ltl {
        nnf(self, true)
    }
}

fn nnf(f: &Ltl, positive: bool) -> Ltl {
    use Ltl::*;
    let b = |g: &Ltl, p: bool| Box::new(nnf(g, p));
    match (f, positive) {
        (True, true) | (False, false) => True,
        (True, false) | (False, true) => False,
        (Atom(a), true) => Atom(a.clone()),
        (Atom(a), false) => Not(Box::new(Atom(a.clone()))),
        (Not(g), p) => nnf(g, !p),
        (And(x, y), true) | (Or(x, y), false) => And(b(x, positive), b(y, positive)),
        (Or(x, y), true) | (And(x, y), false) => Or(b(x, positive), b(y, positive)),
        (Implies(x, y), true) => Or(b(x, false), b(y, true)),
        (Implies(x, y), false) => And(b(x, true), b(y, false)),
        (Iff(x, y), p) => Or(Box::new(And(b(x, true), b(y, p))), Box::new(And(b(x, false), b(y, !p)))),
        (Next(g), p) => Next(b(g, p)),
        (Until(x, y), true) | (Release(x, y), false) => Until(b(x, positive), b(y, positive)),
        (Release(x, y), true) | (Until(x, y), false) => Release(b(x, positive), b(y, positive)),
        (Eventually(g), true) | (Globally(g), false) => Until(Box::new(True), b(g, positive)),
        (Globally(g), true) | (Eventually(g), false) => Release(Box::new(False), b(g, positive)),
    }
}

/// Canonical, fully parenthesized rendering that parses back to the same
/// tree.
impl fmt::Display for Ltl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ltl::True => f.write_str("true"),
            Ltl::False => f.write_str("false"),
            Ltl::Atom(a) => f.write_str(a),
            Ltl::Not(a) => write!(f, "!{a}"),
            Ltl::Next(a) => write!(f, "X {a}"),
            Ltl::Eventually(a) => write!(f, "F {a}"),
            Ltl::Globally(a) => write!(f, "G {a}"),
            Ltl::And(a, b) => write!(f, "({a} & {b})"),
            Ltl::Or(a, b) => write!(f, "({a} | {b})"),
            Ltl::Implies(a, b) => write!(f, "({a} -> {b})"),
            Ltl::Iff(a, b) => write!(f, "({a} <-> {b})"),
            Ltl::Until(a, b) => write!(f, "({a} U {b})"),
            Ltl::Release(a, b) => write!(f, "({a} R {b})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nnf_duals() {
        let a = Ltl::atom("a");
        let b = Ltl::atom("b");
        assert_eq!(
            a.clone().until(b.clone()).not().to_nnf(),
            a.clone().not().release(b.not())
        );
        assert_eq!(a.clone().not().not().to_nnf(), a.clone());
        assert_eq!(
            a.clone().eventually().globally().not().to_nnf(),
            Ltl::True.until(Ltl::False.release(a.not()))
        );
    }

    #[test]
    fn printer_is_parenthesized() {
        let f = Ltl::atom("i2")
            .until(Ltl::atom("i0"))
            .iff(Ltl::atom("o4").eventually().globally())
            .not();
        assert_eq!(f.to_string(), "!((i2 U i0) <-> G F o4)");
    }

    #[test]
    fn atoms_in_order() {
        let f = Ltl::atom("b").and(Ltl::atom("a").or(Ltl::atom("b")));
        assert_eq!(f.atoms(), vec!["b".to_string(), "a".to_string()]);
        assert_eq!(f.depth(), 2);
    }
}
