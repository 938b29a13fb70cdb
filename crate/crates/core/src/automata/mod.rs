//! Nondeterministic Büchi automata with symbolic edge guards.

mod complement;
mod graph;
mod hoa;
mod ops;

use std::collections::{HashMap, VecDeque};

use crate::alphabet::{Alphabet, Letter};
use crate::budget::Budget;
use crate::error::Result;
use crate::guard::{Cube, Guard};
use crate::lasso::LassoWord;

pub(crate) use complement::LazyComplement;
pub use complement::{complement, complement_with_budget, ComplementMethod};
pub use hoa::{emit_hoa, parse_hoa};
pub use ops::{
    inclusion_witness, intersect, intersect_with_budget, is_equivalent, is_subset, remap_alphabet, union, Inclusion,
    SymbolMap,
};

pub(crate) use graph::{live_nodes, scc};

/// An edge `source --guard--> target`. At most one edge exists per
/// `(source, target)` pair; parallel edges are merged by disjunction.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Edge {
    pub guard: Guard,
    pub target: usize,
}

/// A nondeterministic Büchi automaton over the letters `2^alphabet`.
///
/// States are dense indices. A letter `w` moves `q` to every target of an
/// edge of `q` whose guard admits `w`. A run is accepting when it visits
/// accepting states infinitely often.
#[derive(Clone, Debug)]
pub struct Nba {
    alphabet: Alphabet,
    initial: Vec<usize>,
    accepting: Vec<bool>,
    edges: Vec<Vec<Edge>>,
}

/// A state's class in one refinement round: its current block, then its
/// successor blocks either per letter or per guarded edge.
type Signature = (usize, Vec<Vec<usize>>, Vec<(usize, Vec<Cube>)>);

/// Result of an emptiness check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Emptiness {
    Empty,
    /// An accepted lasso.
    NonEmpty(LassoWord),
}

impl Nba {
    /// An automaton with no states (empty language).
    pub fn new(alphabet: Alphabet) -> Nba {
        Nba {
            alphabet,
            initial: Vec::new(),
            accepting: Vec::new(),
            edges: Vec::new(),
        }
    }

    /// One accepting state with a `true` self-loop.
    pub fn universal(alphabet: Alphabet) -> Nba {
        let mut a = Nba::new(alphabet);
        let q = a.add_state(true);
        a.add_initial(q);
        a.add_edge(q, Guard::verum(), q);
        a
    }

    pub fn empty(alphabet: Alphabet) -> Nba {
        Nba::new(alphabet)
    }

    /// Automaton accepting exactly one lasso word.
    pub fn singleton(alphabet: Alphabet, word: &LassoWord) -> Nba {
        let mut a = Nba::new(alphabet);
        let mask = a.alphabet.full_mask();
        let n = word.len();
        for _ in 0..n {
            a.add_state(true);
        }
        a.add_initial(0);
        for i in 0..n {
            a.add_edge(i, Guard::cube(Cube::exact(word.letter(i), mask)), word.succ(i));
        }
        a
    }

    pub fn add_state(&mut self, accepting: bool) -> usize {
        self.accepting.push(accepting);
        self.edges.push(Vec::new());
        self.accepting.len() - 1
    }

    pub fn add_initial(&mut self, q: usize) {
        assert!(q < self.num_states());
        if !self.initial.contains(&q) {
            self.initial.push(q);
        }
    }

    pub fn set_accepting(&mut self, q: usize, accepting: bool) {
        self.accepting[q] = accepting;
    }

    /// Adds `source --guard--> target`, merging with an existing edge to
    /// the same target. Unsatisfiable guards are ignored.
    pub fn add_edge(&mut self, source: usize, guard: Guard, target: usize) {
        assert!(target < self.num_states());
        debug_assert!(
            guard.support() & !self.alphabet.full_mask() == 0,
            "guard mentions undeclared symbols"
        );
        if guard.is_false() {
            return;
        }
        let row = &mut self.edges[source];
        if let Some(e) = row.iter_mut().find(|e| e.target == target) {
            e.guard = e.guard.or(&guard);
        } else {
            row.push(Edge { guard, target });
        }
    }

    /// Appends an edge whose target the caller knows is not yet in the
    /// row, skipping the linear merge lookup of [`Nba::add_edge`].
    pub(crate) fn push_distinct_edge(&mut self, source: usize, guard: Guard, target: usize) {
        debug_assert!(self.edges[source].iter().all(|e| e.target != target));
        if !guard.is_false() {
            self.edges[source].push(Edge { guard, target });
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.accepting.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    pub fn initial_states(&self) -> &[usize] {
        &self.initial
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accepting[q]
    }

    pub fn accepting_states(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_states()).filter(|&q| self.accepting[q])
    }

    pub fn edges(&self, q: usize) -> &[Edge] {
        &self.edges[q]
    }

    /// States reached from `q` on `letter`.
    pub fn successors(&self, q: usize, letter: Letter) -> impl Iterator<Item = usize> + '_ {
        self.edges[q]
            .iter()
            .filter(move |e| e.guard.admits(letter))
            .map(|e| e.target)
    }

    /// Union of the supports of all guards.
    pub fn support(&self) -> u64 {
        self.edges.iter().flatten().fold(0, |m, e| m | e.guard.support())
    }

    fn successor_lists(&self) -> Vec<Vec<usize>> {
        self.edges
            .iter()
            .map(|row| row.iter().map(|e| e.target).collect())
            .collect()
    }

    /// Every state has at most one initial state and, for every letter, at
    /// most one successor.
    pub fn is_deterministic(&self) -> bool {
        if self.initial.len() > 1 {
            return false;
        }
        self.edges.iter().all(|row| {
            row.iter()
                .enumerate()
                .all(|(i, a)| row[i + 1..].iter().all(|b| !a.guard.intersects(&b.guard)))
        })
    }

    /// The states reachable from an accepting state, provided each of them
    /// is deterministic; `None` when the automaton is not semi-deterministic.
    pub fn semideterministic_part(&self) -> Option<Vec<bool>> {
        let roots = (0..self.num_states()).filter(|&q| self.accepting[q]);
        let part = graph::reachable(&self.successor_lists(), roots);
        let deterministic = |row: &Vec<Edge>| {
            row.iter()
                .enumerate()
                .all(|(i, a)| row[i + 1..].iter().all(|b| !a.guard.intersects(&b.guard)))
        };
        (0..self.num_states())
            .all(|q| !part[q] || deterministic(&self.edges[q]))
            .then_some(part)
    }

    /// Every nontrivial SCC consists only of accepting or only of
    /// non-accepting states.
    pub fn is_weak(&self) -> bool {
        let (comp, nontrivial) = scc(&self.successor_lists());
        let mut kind: Vec<Option<bool>> = vec![None; nontrivial.len()];
        for (q, &c) in comp.iter().enumerate() {
            if !nontrivial[c] {
                continue;
            }
            match kind[c] {
                None => kind[c] = Some(self.accepting[q]),
                Some(k) if k != self.accepting[q] => return false,
                _ => {}
            }
        }
        true
    }

    /// Membership of an ultimately periodic word, decided on the product
    /// of the automaton with the positions of the lasso.
    pub fn accepts_lasso(&self, word: &LassoWord) -> bool {
        let len = word.len();
        let n = self.num_states();
        let node = |q: usize, i: usize| q * len + i;
        let mut succ = vec![Vec::new(); n * len];
        for q in 0..n {
            for i in 0..len {
                let letter = word.letter(i);
                let j = word.succ(i);
                succ[node(q, i)] = self.successors(q, letter).map(|t| node(t, j)).collect();
            }
        }
        let live = live_nodes(&succ, self.initial.iter().map(|&q| node(q, 0)), |v| {
            self.accepting[v / len]
        });
        self.initial.iter().any(|&q| live[node(q, 0)])
    }

    /// States reachable from an initial state that can reach an accepting
    /// cycle.
    fn live_states(&self) -> Vec<bool> {
        live_nodes(&self.successor_lists(), self.initial.iter().copied(), |q| {
            self.accepting[q]
        })
    }

    pub fn is_empty(&self) -> bool {
        let live = self.live_states();
        !self.initial.iter().any(|&q| live[q])
    }

    /// Emptiness check returning a shortest-stem accepted lasso when the
    /// language is nonempty.
    pub fn emptiness(&self) -> Emptiness {
        let succ = self.successor_lists();
        let (comp, nontrivial) = scc(&succ);
        let live = self.live_states();
        // BFS from the initial states through live states to the nearest
        // accepting state on a cycle.
        let mut pred: HashMap<usize, (usize, Letter)> = HashMap::new();
        let mut seen = vec![false; self.num_states()];
        let mut queue = VecDeque::new();
        for &q in &self.initial {
            if live[q] && !seen[q] {
                seen[q] = true;
                queue.push_back(q);
            }
        }
        let mut target = None;
        while let Some(q) = queue.pop_front() {
            if self.accepting[q] && nontrivial[comp[q]] {
                target = Some(q);
                break;
            }
            for e in &self.edges[q] {
                if live[e.target] && !seen[e.target] {
                    seen[e.target] = true;
                    pred.insert(e.target, (q, e.guard.pick_letter().unwrap()));
                    queue.push_back(e.target);
                }
            }
        }
        let Some(f) = target else {
            return Emptiness::Empty;
        };
        let mut stem = Vec::new();
        let mut cur = f;
        while let Some(&(p, l)) = pred.get(&cur) {
            stem.push(l);
            cur = p;
        }
        stem.reverse();
        // Shortest cycle through f inside its SCC.
        let mut back: HashMap<usize, (usize, Letter)> = HashMap::new();
        let mut queue = VecDeque::new();
        let mut found = None;
        queue.push_back(f);
        let mut seen = vec![false; self.num_states()];
        'bfs: while let Some(q) = queue.pop_front() {
            for e in &self.edges[q] {
                if comp[e.target] != comp[f] {
                    continue;
                }
                let l = e.guard.pick_letter().unwrap();
                if e.target == f {
                    found = Some((q, l));
                    break 'bfs;
                }
                if !seen[e.target] {
                    seen[e.target] = true;
                    back.insert(e.target, (q, l));
                    queue.push_back(e.target);
                }
            }
        }
        let (last, l) = found.expect("accepting state lies on a cycle");
        let mut cycle = vec![l];
        let mut cur = last;
        while cur != f {
            let (p, l) = back[&cur];
            cycle.push(l);
            cur = p;
        }
        cycle.reverse();
        Emptiness::NonEmpty(LassoWord::new(stem, cycle).unwrap())
    }

    /// Keeps the states given by `keep`, renumbered in increasing order.
    fn restrict_states(&self, keep: &[bool]) -> Nba {
        let mut index = vec![usize::MAX; self.num_states()];
        let mut out = Nba::new(self.alphabet.clone());
        for q in 0..self.num_states() {
            if keep[q] {
                index[q] = out.add_state(self.accepting[q]);
            }
        }
        for &q in &self.initial {
            if keep[q] {
                out.add_initial(index[q]);
            }
        }
        for q in 0..self.num_states() {
            if !keep[q] {
                continue;
            }
            for e in &self.edges[q] {
                if keep[e.target] {
                    out.add_edge(index[q], e.guard.clone(), index[e.target]);
                }
            }
        }
        out
    }

    /// Removes states that are unreachable or cannot reach an accepting
    /// cycle. The language is unchanged.
    pub fn trim(&self) -> Nba {
        self.restrict_states(&self.live_states())
    }

    /// Trims, then merges states with the same acceptance flag and the
    /// same guarded moves into the same classes (a bisimulation quotient).
    pub fn reduce(&self) -> Nba {
        self.reduce_with_budget(Budget::unlimited())
            .expect("an unlimited budget never runs out")
    }

    /// [`Nba::reduce`] that gives up when `budget` runs out.
    pub fn reduce_with_budget(&self, budget: Budget) -> Result<Nba> {
        let a = self.trim();
        let n = a.num_states();
        if n == 0 {
            return Ok(a);
        }
        let support = a.support();
        let letters: Option<Vec<Letter>> =
            (support.count_ones() <= 10).then(|| crate::alphabet::submasks(support).map(Letter).collect());
        let mut block: Vec<usize> = a.accepting.iter().map(|&f| f as usize).collect();
        let mut num_blocks = 0;
        loop {
            let mut sigs: HashMap<Signature, usize> = HashMap::new();
            let mut next = vec![0; n];
            for q in 0..n {
                if q % 1024 == 0 {
                    budget.check()?;
                }
                let (semantic, syntactic) = match &letters {
                    Some(ls) => {
                        let rows = ls
                            .iter()
                            .map(|&l| {
                                let mut t: Vec<usize> = a.successors(q, l).map(|t| block[t]).collect();
                                t.sort_unstable();
                                t.dedup();
                                t
                            })
                            .collect();
                        (rows, Vec::new())
                    }
                    None => {
                        let mut per_block: Vec<(usize, Guard)> = Vec::new();
                        for e in &a.edges[q] {
                            let b = block[e.target];
                            match per_block.iter_mut().find(|(x, _)| *x == b) {
                                Some((_, g)) => *g = g.or(&e.guard),
                                None => per_block.push((b, e.guard.clone())),
                            }
                        }
                        per_block.sort_by_key(|(b, _)| *b);
                        let syn = per_block.into_iter().map(|(b, g)| (b, g.cubes().to_vec())).collect();
                        (Vec::new(), syn)
                    }
                };
                let key = (block[q], semantic, syntactic);
                let id = sigs.len();
                next[q] = *sigs.entry(key).or_insert(id);
            }
            let count = sigs.len();
            block = next;
            if count == num_blocks {
                break;
            }
            num_blocks = count;
        }
        let mut out = Nba::new(a.alphabet.clone());
        let mut rep = vec![usize::MAX; num_blocks];
        for q in 0..n {
            if rep[block[q]] == usize::MAX {
                rep[block[q]] = q;
            }
        }
        for &r in &rep {
            out.add_state(a.accepting[r]);
        }
        for &q in &a.initial {
            out.add_initial(block[q]);
        }
        for (b, &r) in rep.iter().enumerate() {
            for e in &a.edges[r] {
                out.add_edge(b, e.guard.clone(), block[e.target]);
            }
        }
        Ok(out)
    }

    /// Same automaton with its alphabet replaced by `alphabet`, which must
    /// start with the current symbols. New symbols are unconstrained.
    pub fn widen_alphabet(&self, alphabet: Alphabet) -> Nba {
        assert!(alphabet.symbols().starts_with(self.alphabet.symbols()));
        Nba {
            alphabet,
            ..self.clone()
        }
    }

    /// Human-readable listing, one edge per line.
    pub fn describe(&self) -> String {
        let mut out = format!(
            "{} states, initial {:?}, accepting {:?}\n",
            self.num_states(),
            self.initial,
            self.accepting_states().collect::<Vec<_>>()
        );
        for q in 0..self.num_states() {
            for e in &self.edges[q] {
                let g = e.guard.display_with(|i| self.alphabet.name(i).to_string()).to_string();
                out.push_str(&format!("  {q} -[{g}]-> {}\n", e.target));
            }
        }
        out
    }
}

/// The minterms over the symbols of `mask`, as guards.
pub(crate) fn minterms(mask: u64) -> impl Iterator<Item = (Letter, Cube)> {
    crate::alphabet::submasks(mask).map(move |m| (Letter(m), Cube::exact(Letter(m), mask)))
}
