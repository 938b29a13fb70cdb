//! Tableau translation of LTL to Büchi automata.
//!
//! The formula is put in negation normal form and hash-consed. A state of
//! the generalized automaton is a set of obligations; expanding it yields
//! *terms* `(cube, next obligations, postponed untils)`. A transition is
//! in the acceptance set of an until `a U b` unless it postponed that
//! until. A counter over the untils then degeneralizes to a plain Büchi
//! condition.

use std::collections::{BTreeSet, HashMap, VecDeque};

use super::Ltl;
use crate::alphabet::Alphabet;
use crate::automata::Nba;
use crate::error::{Error, Result};
use crate::guard::{Cube, Guard};

type Id = usize;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
enum Node {
    True,
    False,
    Lit(usize, bool),
    And(Id, Id),
    Or(Id, Id),
    Next(Id),
    Until(Id, Id),
    Release(Id, Id),
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
struct Term {
    cube: Cube,
    next: BTreeSet<Id>,
    /// Bit `k` set: until number `k` was postponed.
    pending: u64,
}

impl Term {
    fn top() -> Term {
        Term {
            cube: Cube::TOP,
            next: BTreeSet::new(),
            pending: 0,
        }
    }

    fn and(&self, other: &Term) -> Option<Term> {
        Some(Term {
            cube: self.cube.and(other.cube)?,
            next: self.next.union(&other.next).copied().collect(),
            pending: self.pending | other.pending,
        })
    }

    /// Every run allowed by `other` is also allowed by `self`, with no
    /// more obligations and no more postponements.
    fn subsumes(&self, other: &Term) -> bool {
        other.cube.implies(self.cube) && self.next.is_subset(&other.next) && self.pending & !other.pending == 0
    }
}

struct Tableau {
    nodes: Vec<Node>,
    ids: HashMap<Node, Id>,
    /// Until nodes in order of creation.
    untils: Vec<Id>,
    expansions: HashMap<Id, Vec<Term>>,
}

impl Tableau {
    fn intern(&mut self, n: Node) -> Id {
        if let Some(&id) = self.ids.get(&n) {
            return id;
        }
        let id = self.nodes.len();
        if matches!(n, Node::Until(..)) {
            self.untils.push(id);
        }
        self.nodes.push(n.clone());
        self.ids.insert(n, id);
        id
    }

    fn build(&mut self, f: &Ltl, ab: &Alphabet) -> Result<Id> {
        let n = match f {
            Ltl::True => Node::True,
            Ltl::False => Node::False,
            Ltl::Atom(a) => Node::Lit(lookup(ab, a)?, true),
            Ltl::Not(inner) => match inner.as_ref() {
                Ltl::Atom(a) => Node::Lit(lookup(ab, a)?, false),
                _ => unreachable!("formula is in negation normal form"),
            },
            Ltl::And(a, b) => Node::And(self.build(a, ab)?, self.build(b, ab)?),
            Ltl::Or(a, b) => Node::Or(self.build(a, ab)?, self.build(b, ab)?),
            Ltl::Next(a) => Node::Next(self.build(a, ab)?),
            Ltl::Until(a, b) => Node::Until(self.build(a, ab)?, self.build(b, ab)?),
            Ltl::Release(a, b) => Node::Release(self.build(a, ab)?, self.build(b, ab)?),
            _ => unreachable!("formula is in negation normal form"),
        };
        Ok(self.intern(n))
    }

    fn until_bit(&self, id: Id) -> u64 {
        1 << self.untils.iter().position(|&u| u == id).unwrap()
    }

    fn expand(&mut self, id: Id) -> Vec<Term> {
        if let Some(t) = self.expansions.get(&id) {
            return t.clone();
        }
        let terms = match self.nodes[id].clone() {
            Node::True => vec![Term::top()],
            Node::False => vec![],
            Node::Lit(v, pos) => vec![Term {
                cube: Cube::literal(v, pos),
                ..Term::top()
            }],
            Node::And(a, b) => {
                let (ta, tb) = (self.expand(a), self.expand(b));
                product(&ta, &tb)
            }
            Node::Or(a, b) => {
                let mut t = self.expand(a);
                t.extend(self.expand(b));
                t
            }
            Node::Next(a) => vec![Term {
                next: [a].into(),
                ..Term::top()
            }],
            Node::Until(a, b) => {
                let mut t = self.expand(b);
                let stay = Term {
                    next: [id].into(),
                    pending: self.until_bit(id),
                    ..Term::top()
                };
                t.extend(self.expand(a).iter().filter_map(|x| x.and(&stay)));
                t
            }
            Node::Release(a, b) => {
                let (ta, tb) = (self.expand(a), self.expand(b));
                let mut t = product(&ta, &tb);
                let stay = Term {
                    next: [id].into(),
                    ..Term::top()
                };
                t.extend(tb.iter().filter_map(|x| x.and(&stay)));
                t
            }
        };
        let terms = prune(terms);
        self.expansions.insert(id, terms.clone());
        terms
    }

    fn expand_state(&mut self, state: &BTreeSet<Id>) -> Vec<Term> {
        let mut acc = vec![Term::top()];
        for &id in state {
            let t = self.expand(id);
            acc = prune(product(&acc, &t));
            if acc.is_empty() {
                break;
            }
        }
        acc
    }
}

fn lookup(ab: &Alphabet, a: &str) -> Result<usize> {
    ab.index_of(a).ok_or_else(|| Error::UnknownAtom(a.to_string()))
}

fn product(a: &[Term], b: &[Term]) -> Vec<Term> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            if let Some(t) = x.and(y) {
                out.push(t);
            }
        }
    }
    out
}

/// Drops duplicate and subsumed terms.
fn prune(mut terms: Vec<Term>) -> Vec<Term> {
    terms.sort_by_key(|t| (t.next.len(), t.pending.count_ones(), t.cube.support().count_ones()));
    let mut kept: Vec<Term> = Vec::with_capacity(terms.len());
    for t in terms {
        if !kept.iter().any(|k| k.subsumes(&t)) {
            kept.push(t);
        }
    }
    kept
}

/// Büchi automaton over `2^alphabet` accepting exactly the models of
/// `formula`. Every atom must be a symbol of `alphabet`.
pub fn ltl_to_nba(formula: &Ltl, alphabet: &Alphabet) -> Result<Nba> {
    let mut tab = Tableau {
        nodes: Vec::new(),
        ids: HashMap::new(),
        untils: Vec::new(),
        expansions: HashMap::new(),
    };
    let root = tab.build(&formula.to_nnf(), alphabet)?;
    let k = tab.untils.len();
    if k > 63 {
        return Err(Error::InvalidArgument(format!(
            "formula has {k} until subformulas, at most 63 are supported"
        )));
    }
    let all = (1u64 << k) - 1;

    // Explore (obligation set, degeneralization level) pairs.
    let mut out = Nba::new(alphabet.clone());
    let mut index: HashMap<(BTreeSet<Id>, usize), usize> = HashMap::new();
    let mut queue: VecDeque<(BTreeSet<Id>, usize)> = VecDeque::new();
    let accepting_level = |level: usize| k == 0 || level == k;
    let mut state_of = |key: (BTreeSet<Id>, usize), out: &mut Nba, queue: &mut VecDeque<(BTreeSet<Id>, usize)>| {
        *index.entry(key.clone()).or_insert_with(|| {
            let q = out.add_state(accepting_level(key.1));
            queue.push_back(key);
            q
        })
    };
    let init = state_of(([root].into(), 0), &mut out, &mut queue);
    out.add_initial(init);
    let mut edges: Vec<(usize, Cube, usize)> = Vec::new();
    while let Some((obligations, level)) = queue.pop_front() {
        let src = state_of((obligations.clone(), level), &mut out, &mut queue);
        let base = if level == k { 0 } else { level };
        for term in tab.expand_state(&obligations) {
            let satisfied = all & !term.pending;
            let mut l = base;
            while l < k && satisfied >> l & 1 == 1 {
                l += 1;
            }
            let dst = state_of((term.next.clone(), l), &mut out, &mut queue);
            edges.push((src, term.cube, dst));
        }
    }
    let mut grouped: HashMap<(usize, usize), Vec<Cube>> = HashMap::new();
    for (s, c, t) in edges {
        grouped.entry((s, t)).or_default().push(c);
    }
    let mut grouped: Vec<_> = grouped.into_iter().collect();
    grouped.sort_by_key(|(k, _)| *k);
    for ((s, t), cubes) in grouped {
        out.add_edge(s, Guard::from_cubes(cubes), t);
    }
    Ok(out.reduce())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Letter;
    use crate::lasso::LassoWord;
    use crate::ltl::{parse_ltl, ApUniverse};

    fn nba(f: &str, aps: &[&str]) -> Nba {
        let ab = Alphabet::new(aps.iter().copied()).unwrap();
        ltl_to_nba(&parse_ltl(f, ApUniverse::Open).unwrap(), &ab).unwrap()
    }

    #[test]
    fn true_is_universal() {
        let a = nba("true", &["x"]);
        assert_eq!(a.num_states(), 1);
        assert!(a.accepts_lasso(&LassoWord::constant(Letter(0))));
        assert!(nba("false", &["x"]).is_empty());
    }

    #[test]
    fn eventually_x_has_two_states() {
        let a = nba("F x", &["x"]);
        assert_eq!(a.num_states(), 2);
        assert!(a.accepts_lasso(&LassoWord::constant(Letter(1))));
        assert!(!a.accepts_lasso(&LassoWord::constant(Letter(0))));
    }

    #[test]
    fn gf_requires_recurrence() {
        let a = nba("G F x", &["x"]);
        let w = LassoWord::new(vec![], vec![Letter(0), Letter(1)]).unwrap();
        assert!(a.accepts_lasso(&w));
        let w = LassoWord::new(vec![Letter(1)], vec![Letter(0)]).unwrap();
        assert!(!a.accepts_lasso(&w));
    }

    #[test]
    fn unknown_atom_rejected() {
        let ab = Alphabet::new(["x"]).unwrap();
        assert!(ltl_to_nba(&Ltl::atom("y"), &ab).is_err());
    }
}
