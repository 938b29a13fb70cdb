//! Products, alphabet remapping and language inclusion.

use std::collections::HashMap;
use std::hash::Hash;

use super::complement::{LazyAutomaton, LazyComplement};
use super::{minterms, Emptiness, Nba};
use crate::alphabet::{Alphabet, Letter};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::guard::{Cube, Guard};
use crate::lasso::LassoWord;

fn same_alphabet(a: &Nba, b: &Nba) -> Result<()> {
    if a.alphabet() != b.alphabet() {
        return Err(Error::AlphabetMismatch(format!("{} vs {}", a.alphabet(), b.alphabet())));
    }
    Ok(())
}

/// Reachable-state builder keyed by arbitrary product states.
struct Builder<K> {
    out: Nba,
    index: HashMap<K, usize>,
    todo: Vec<K>,
}

impl<K: Clone + Eq + Hash> Builder<K> {
    fn new(alphabet: Alphabet) -> Self {
        Builder {
            out: Nba::new(alphabet),
            index: HashMap::new(),
            todo: Vec::new(),
        }
    }

    fn state(&mut self, k: K, accepting: bool) -> usize {
        if let Some(&q) = self.index.get(&k) {
            return q;
        }
        let q = self.out.add_state(accepting);
        self.index.insert(k.clone(), q);
        self.todo.push(k);
        q
    }
}

/// Büchi acceptance for a product of two automata. When one side accepts
/// everywhere the other side's acceptance is used directly; otherwise a
/// phase bit waits alternately for each side.
#[derive(Clone, Copy)]
enum Phases {
    Left,
    Right,
    Both,
}

impl Phases {
    fn pick(all_left: bool, all_right: bool) -> Phases {
        if all_right {
            Phases::Left
        } else if all_left {
            Phases::Right
        } else {
            Phases::Both
        }
    }

    fn accepting(self, fa: bool, fb: bool, phase: u8) -> bool {
        match self {
            Phases::Left => fa,
            Phases::Right => fb,
            Phases::Both => phase == 1 && fb,
        }
    }

    fn next(self, fa: bool, fb: bool, phase: u8) -> u8 {
        match self {
            Phases::Both => match phase {
                0 if fa => 1,
                1 if fb => 0,
                p => p,
            },
            _ => 0,
        }
    }
}

pub fn intersect(a: &Nba, b: &Nba) -> Result<Nba> {
    intersect_with_budget(a, b, Budget::unlimited())
}

/// `L(a) ∩ L(b)`, reachable states only.
pub fn intersect_with_budget(a: &Nba, b: &Nba, budget: Budget) -> Result<Nba> {
    same_alphabet(a, b)?;
    let phases = Phases::pick(
        (0..a.num_states()).all(|q| a.is_accepting(q)),
        (0..b.num_states()).all(|q| b.is_accepting(q)),
    );
    let mut bld: Builder<(usize, usize, u8)> = Builder::new(a.alphabet().clone());
    for &p in a.initial_states() {
        for &q in b.initial_states() {
            let acc = phases.accepting(a.is_accepting(p), b.is_accepting(q), 0);
            let s = bld.state((p, q, 0), acc);
            bld.out.add_initial(s);
        }
    }
    while let Some((p, q, ph)) = bld.todo.pop() {
        budget.check()?;
        let src = bld.index[&(p, q, ph)];
        let nph = phases.next(a.is_accepting(p), b.is_accepting(q), ph);
        for ea in a.edges(p) {
            for eb in b.edges(q) {
                let g = ea.guard.and(&eb.guard);
                if g.is_false() {
                    continue;
                }
                let acc = phases.accepting(a.is_accepting(ea.target), b.is_accepting(eb.target), nph);
                let dst = bld.state((ea.target, eb.target, nph), acc);
                bld.out.add_edge(src, g, dst);
            }
        }
    }
    Ok(bld.out.trim())
}

/// `L(a) ∪ L(b)` by disjoint union.
pub fn union(a: &Nba, b: &Nba) -> Result<Nba> {
    same_alphabet(a, b)?;
    let mut out = a.clone();
    let off = out.num_states();
    for q in 0..b.num_states() {
        out.add_state(b.is_accepting(q));
    }
    for &q in b.initial_states() {
        out.add_initial(q + off);
    }
    for q in 0..b.num_states() {
        for e in b.edges(q) {
            out.add_edge(q + off, e.guard.clone(), e.target + off);
        }
    }
    Ok(out)
}

/// Product of an explicit automaton with a lazily explored one. Guards of
/// `a` are split into minterms over the lazy automaton's support.
pub(crate) fn intersect_lazy(a: &Nba, lazy: &mut impl LazyAutomaton, budget: Budget) -> Result<Nba> {
    let lazy_init = lazy.initial();
    let mut bld: Builder<(usize, usize, u8)> = Builder::new(a.alphabet().clone());
    let phases = Phases::pick((0..a.num_states()).all(|q| a.is_accepting(q)), false);
    for &p in a.initial_states() {
        for &q in &lazy_init {
            let acc = phases.accepting(a.is_accepting(p), lazy.is_accepting(q), 0);
            let s = bld.state((p, q, 0), acc);
            bld.out.add_initial(s);
        }
    }
    let letters: Vec<(Letter, Cube)> = minterms(lazy.support()).collect();
    while let Some((p, q, ph)) = bld.todo.pop() {
        budget.check()?;
        let src = bld.index[&(p, q, ph)];
        let nph = phases.next(a.is_accepting(p), lazy.is_accepting(q), ph);
        for ea in a.edges(p) {
            for &(l, cube) in &letters {
                let g = ea.guard.and_cube(cube);
                if g.is_false() {
                    continue;
                }
                for t in lazy.successors(q, l)? {
                    let acc = phases.accepting(a.is_accepting(ea.target), lazy.is_accepting(t), nph);
                    let dst = bld.state((ea.target, t, nph), acc);
                    bld.out.add_edge(src, g.clone(), dst);
                }
            }
        }
    }
    Ok(bld.out)
}

/// Outcome of a language inclusion check `L(a) ⊆ L(b)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Inclusion {
    Holds,
    /// A word accepted by `a` and rejected by `b`.
    Fails(LassoWord),
}

/// Decides `L(a) ⊆ L(b)` by an emptiness check on `a ∩ complement(b)`,
/// exploring the complement only along letters that `a` can read.
pub fn inclusion_witness(a: &Nba, b: &Nba, budget: Budget) -> Result<Inclusion> {
    same_alphabet(a, b)?;
    let a = a.trim();
    if a.num_states() == 0 {
        return Ok(Inclusion::Holds);
    }
    let mut lazy = LazyComplement::new(b, budget);
    let product = intersect_lazy(&a, &mut lazy, budget)?;
    Ok(match product.emptiness() {
        Emptiness::Empty => Inclusion::Holds,
        Emptiness::NonEmpty(w) => Inclusion::Fails(w),
    })
}

pub fn is_subset(a: &Nba, b: &Nba) -> Result<bool> {
    Ok(inclusion_witness(a, b, Budget::unlimited())? == Inclusion::Holds)
}

pub fn is_equivalent(a: &Nba, b: &Nba) -> Result<bool> {
    Ok(is_subset(a, b)? && is_subset(b, a)?)
}

/// What happens to one symbol of the source alphabet under
/// [`remap_alphabet`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SymbolMap {
    /// Keep the symbol under a (possibly new) name of the target alphabet.
    Rename(String),
    /// Existentially project the symbol away.
    Drop,
    /// Existentially project the symbol away; the target alphabet must
    /// contain a symbol of the same name, which is left unconstrained.
    Free,
}

/// Moves `a` onto the alphabet `target`. Every source symbol is mapped by
/// `mapping`; target symbols not hit by a rename are unconstrained.
pub fn remap_alphabet(a: &Nba, target: &Alphabet, mapping: impl Fn(&str) -> SymbolMap) -> Result<Nba> {
    let src = a.alphabet();
    let mut projected = 0u64;
    let mut dest = vec![usize::MAX; src.len()];
    let mut hit = vec![false; target.len()];
    for (i, name) in src.symbols().iter().enumerate() {
        match mapping(name) {
            SymbolMap::Rename(t) => {
                let j = target
                    .index_of(&t)
                    .ok_or_else(|| Error::AlphabetMismatch(format!("`{t}` not in {target}")))?;
                if hit[j] {
                    return Err(Error::NameCollision(t));
                }
                hit[j] = true;
                dest[i] = j;
            }
            SymbolMap::Drop => projected |= 1 << i,
            SymbolMap::Free => {
                if !target.contains(name) {
                    return Err(Error::AlphabetMismatch(format!("`{name}` not in {target}")));
                }
                projected |= 1 << i;
            }
        }
    }
    let mut out = Nba::new(target.clone());
    for q in 0..a.num_states() {
        out.add_state(a.is_accepting(q));
    }
    for &q in a.initial_states() {
        out.add_initial(q);
    }
    for q in 0..a.num_states() {
        for e in a.edges(q) {
            let g: Guard = e.guard.exists(projected).map_vars(|v| dest[v]);
            out.add_edge(q, g, e.target);
        }
    }
    Ok(out)
}
