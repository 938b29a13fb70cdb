use super::Ltl;
use crate::alphabet::Alphabet;
use crate::error::{Error, Result};
use crate::lasso::LassoWord;

/// Whether `word` satisfies `formula` at position 0. Symbols are resolved
/// through `alphabet`.
pub fn eval_on_lasso(formula: &Ltl, alphabet: &Alphabet, word: &LassoWord) -> Result<bool> {
    Ok(positions(formula, alphabet, word)?[0])
}

/// Truth value of `f` at every stored position of `w`.
fn positions(f: &Ltl, ab: &Alphabet, w: &LassoWord) -> Result<Vec<bool>> {
    let n = w.len();
    let succ = |i: usize| w.succ(i);
    Ok(match f {
        Ltl::True => vec![true; n],
        Ltl::False => vec![false; n],
        Ltl::Atom(a) => {
            let i = ab.index_of(a).ok_or_else(|| Error::UnknownAtom(a.clone()))?;
            (0..n).map(|p| w.letter(p).contains(i)).collect()
        }
        Ltl::Not(a) => positions(a, ab, w)?.into_iter().map(|v| !v).collect(),
        Ltl::And(a, b) => zip(positions(a, ab, w)?, positions(b, ab, w)?, |x, y| x && y),
        Ltl::Or(a, b) => zip(positions(a, ab, w)?, positions(b, ab, w)?, |x, y| x || y),
        Ltl::Implies(a, b) => zip(positions(a, ab, w)?, positions(b, ab, w)?, |x, y| !x || y),
        Ltl::Iff(a, b) => zip(positions(a, ab, w)?, positions(b, ab, w)?, |x, y| x == y),
        Ltl::Next(a) => {
            let va = positions(a, ab, w)?;
            (0..n).map(|i| va[succ(i)]).collect()
        }
        Ltl::Until(a, b) => {
            let (va, vb) = (positions(a, ab, w)?, positions(b, ab, w)?);
            fixpoint(n, false, succ, |i, next| vb[i] || (va[i] && next))
        }
        Ltl::Release(a, b) => {
            let (va, vb) = (positions(a, ab, w)?, positions(b, ab, w)?);
            fixpoint(n, true, succ, |i, next| vb[i] && (va[i] || next))
        }
        Ltl::Eventually(a) => {
            let va = positions(a, ab, w)?;
            fixpoint(n, false, succ, |i, next| va[i] || next)
        }
        Ltl::Globally(a) => {
            let va = positions(a, ab, w)?;
            fixpoint(n, true, succ, |i, next| va[i] && next)
        }
    })
}

fn zip(a: Vec<bool>, b: Vec<bool>, f: impl Fn(bool, bool) -> bool) -> Vec<bool> {
    a.into_iter().zip(b).map(|(x, y)| f(x, y)).collect()
}

/// Iterates `val[i] = step(i, val[succ(i)])` from the constant `init`
/// until stable: the least fixpoint from `false`, the greatest from `true`.
fn fixpoint(n: usize, init: bool, succ: impl Fn(usize) -> usize, step: impl Fn(usize, bool) -> bool) -> Vec<bool> {
    let mut val = vec![init; n];
    loop {
        let mut changed = false;
        for i in (0..n).rev() {
            let v = step(i, val[succ(i)]);
            if v != val[i] {
                val[i] = v;
                changed = true;
            }
        }
        if !changed {
            return val;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltl::{parse_ltl, ApUniverse};

    fn check(formula: &str, aps: &[&str], word: &str) -> bool {
        let ab = Alphabet::new(aps.iter().copied()).unwrap();
        let f = parse_ltl(formula, ApUniverse::Open).unwrap();
        let w = LassoWord::parse(word, &ab).unwrap();
        eval_on_lasso(&f, &ab, &w).unwrap()
    }

    #[test]
    fn examples() {
        assert!(check("F e", &["x", "e"], "({x,e})^w"));
        assert!(!check("G x", &["x"], "{x};({})^w"));
        assert!(check(
            "!((i2 U i0) <-> G F o4)",
            &["i0", "i2", "o4"],
            "{i2};{};{i0,o4};({i2,o4})^w"
        ));
    }

    #[test]
    fn until_needs_fulfilment() {
        assert!(!check("a U b", &["a", "b"], "({a})^w"));
        assert!(check("a R b", &["a", "b"], "({b})^w"));
        assert!(check("G F a", &["a"], "{};({};{a})^w"));
        assert!(!check("F G a", &["a"], "({};{a})^w"));
        assert!(check("X X a", &["a"], "{};({};{a})^w"));
    }

    #[test]
    fn unknown_atom() {
        let ab = Alphabet::new(["a"]).unwrap();
        let w = LassoWord::constant(crate::alphabet::Letter(0));
        assert!(eval_on_lasso(&Ltl::atom("b"), &ab, &w).is_err());
    }
}
