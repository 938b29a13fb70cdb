//! Büchi complementation.
//!
//! Four constructions share one lazy interface:
//!
//! * deterministic automata: two copies plus a rejecting-run sink;
//! * weak automata: the breakpoint (Miyano–Hayashi) subset construction;
//! * semi-deterministic automata, deterministic from the first accepting
//!   state on: the NCSB construction;
//! * everything else: rank-based complementation restricted to tight
//!   level rankings.
//!
//! [`LazyComplement`] builds macrostates on demand, so callers that only
//! need the successors for a handful of letters (the synthesis pipeline
//! fixes most of the letter on every step) never pay for the full
//! `2^support` fan-out.

use std::collections::HashMap;
use std::hash::Hash;

use log::debug;

use super::graph::reachable;
use super::{minterms, Edge, Nba};
use crate::alphabet::Letter;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::guard::{Cube, Guard};

/// Which construction a complementation used.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComplementMethod {
    Deterministic,
    Breakpoint,
    Ncsb,
    RankBased,
}

/// An automaton explored on demand. States are dense ids handed out in
/// discovery order.
pub(crate) trait LazyAutomaton {
    fn initial(&mut self) -> Vec<usize>;
    fn successors(&mut self, q: usize, letter: Letter) -> Result<Vec<usize>>;
    fn is_accepting(&self, q: usize) -> bool;
    /// Only the symbols in this mask influence `successors`.
    fn support(&self) -> u64;
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
enum Macro {
    Sink,
    /// Deterministic complement: state of the input automaton, and whether
    /// the run has committed to avoiding accepting states.
    Copy(usize, bool),
    /// Breakpoint construction: reachable set and owing set.
    Breakpoint(Vec<usize>, Vec<usize>),
    /// NCSB: states of the nondeterministic part, deterministic-part states
    /// that may still visit accepting states, those guessed never to visit
    /// them again, and the breakpoint subset of the second set.
    Ncsb(Vec<usize>, Vec<usize>, Vec<usize>, Vec<usize>),
    /// Rank-based: the subset phase before guessing a ranking.
    Waiting(Vec<usize>),
    /// Rank-based: states, their ranks (parallel to the states), owing set.
    Ranked(Vec<usize>, Vec<u32>, Vec<usize>),
}

pub(crate) struct LazyComplement {
    nba: Nba,
    method: ComplementMethod,
    /// Deterministic part, for the NCSB construction.
    part: Vec<bool>,
    support: u64,
    states: Vec<Macro>,
    index: HashMap<Macro, usize>,
    cache: HashMap<(usize, u64), Vec<usize>>,
    budget: Budget,
}

impl LazyComplement {
    pub(crate) fn new(nba: &Nba, budget: Budget) -> LazyComplement {
        LazyComplement::build(nba, budget, true)
    }

    fn build(nba: &Nba, budget: Budget, saturate: bool) -> LazyComplement {
        let mut nba = nba.reduce();
        if saturate && !nba.is_deterministic() && !nba.is_weak() {
            nba = saturate_universal(&nba, budget);
        }
        let semi = nba.semideterministic_part();
        let method = if nba.is_deterministic() {
            ComplementMethod::Deterministic
        } else if nba.is_weak() {
            ComplementMethod::Breakpoint
        } else if semi.is_some() {
            ComplementMethod::Ncsb
        } else {
            ComplementMethod::RankBased
        };
        debug!(
            "complementing {} states with {:?} construction",
            nba.num_states(),
            method
        );
        LazyComplement {
            support: nba.support(),
            part: semi.unwrap_or_default(),
            nba,
            method,
            states: Vec::new(),
            index: HashMap::new(),
            cache: HashMap::new(),
            budget,
        }
    }

    pub(crate) fn method(&self) -> ComplementMethod {
        self.method
    }

    fn intern(&mut self, m: Macro) -> usize {
        if let Some(&id) = self.index.get(&m) {
            return id;
        }
        let id = self.states.len();
        self.states.push(m.clone());
        self.index.insert(m, id);
        id
    }

    fn post(&self, set: &[usize], letter: Letter) -> Vec<usize> {
        let mut out: Vec<usize> = set.iter().flat_map(|&q| self.nba.successors(q, letter)).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    fn compute(&self, m: &Macro, letter: Letter) -> Result<Vec<Macro>> {
        let a = &self.nba;
        Ok(match m {
            Macro::Sink => vec![Macro::Sink],
            Macro::Copy(q, committed) => {
                let Some(t) = a.successors(*q, letter).next() else {
                    return Ok(vec![Macro::Sink]);
                };
                let fin = a.is_accepting(t);
                match (committed, fin) {
                    (false, false) => vec![Macro::Copy(t, false), Macro::Copy(t, true)],
                    (false, true) => vec![Macro::Copy(t, false)],
                    (true, false) => vec![Macro::Copy(t, true)],
                    (true, true) => vec![],
                }
            }
            Macro::Breakpoint(s, o) => {
                let s2 = self.post(s, letter);
                let base = if o.is_empty() { s2.clone() } else { self.post(o, letter) };
                let o2 = base.into_iter().filter(|&q| a.is_accepting(q)).collect();
                vec![Macro::Breakpoint(s2, o2)]
            }
            Macro::Ncsb(n, c, s, b) => {
                let bad = |set: &[usize]| set.iter().any(|&q| a.is_accepting(q));
                let safe = self.post(s, letter);
                if bad(&safe) {
                    return Ok(Vec::new());
                }
                let (n2, entering): (Vec<usize>, Vec<usize>) =
                    self.post(n, letter).into_iter().partition(|&q| !self.part[q]);
                let mut tracked: Vec<usize> = entering
                    .into_iter()
                    .chain(self.post(c, letter))
                    .chain(safe.iter().copied())
                    .collect();
                tracked.sort_unstable();
                tracked.dedup();
                let watched = if b.is_empty() {
                    tracked.clone()
                } else {
                    self.post(b, letter)
                };
                // Either no run guesses, or every watched run at a
                // non-accepting state declares it is done with accepting
                // states. Waiting for the moment all watched runs are done
                // makes the second choice enough.
                let mut guesses = vec![safe.clone()];
                let mut all = safe.clone();
                all.extend(watched.iter().copied().filter(|&q| !a.is_accepting(q)));
                all.sort_unstable();
                all.dedup();
                if all.len() > safe.len() {
                    guesses.push(all);
                }
                let mut out = Vec::with_capacity(guesses.len());
                for s2 in guesses {
                    let c2: Vec<usize> = tracked
                        .iter()
                        .copied()
                        .filter(|q| s2.binary_search(q).is_err())
                        .collect();
                    let b2 = watched
                        .iter()
                        .copied()
                        .filter(|q| c2.binary_search(q).is_ok())
                        .collect();
                    out.push(Macro::Ncsb(n2.clone(), c2, s2, b2));
                }
                out
            }
            Macro::Waiting(s) => {
                let s2 = self.post(s, letter);
                let bound = vec![u32::MAX; s2.len()];
                let mut out: Vec<Macro> = tight_rankings(a, &s2, &bound, &self.budget)?
                    .into_iter()
                    .map(|g| Macro::Ranked(s2.clone(), g, Vec::new()))
                    .collect();
                out.push(Macro::Waiting(s2));
                out
            }
            Macro::Ranked(s, g, o) => {
                let s2 = self.post(s, letter);
                let mut bound = vec![u32::MAX; s2.len()];
                for (i, &q) in s.iter().enumerate() {
                    for t in a.successors(q, letter) {
                        let j = s2.binary_search(&t).unwrap();
                        bound[j] = bound[j].min(g[i]);
                    }
                }
                let o_post = if o.is_empty() { s2.clone() } else { self.post(o, letter) };
                tight_rankings(a, &s2, &bound, &self.budget)?
                    .into_iter()
                    .map(|g2| {
                        let o2 = o_post
                            .iter()
                            .copied()
                            .filter(|t| g2[s2.binary_search(t).unwrap()] % 2 == 0)
                            .collect();
                        Macro::Ranked(s2.clone(), g2, o2)
                    })
                    .collect()
            }
        })
    }

    /// Materializes the reachable part over all minterms of the support.
    pub(crate) fn materialize(&mut self) -> Result<Nba> {
        let mut out = Nba::new(self.nba.alphabet().clone());
        let init = self.initial();
        let mut todo: Vec<usize> = Vec::new();
        let mut map: HashMap<usize, usize> = HashMap::new();
        let mut node = |id: usize, out: &mut Nba, todo: &mut Vec<usize>, acc: bool| {
            *map.entry(id).or_insert_with(|| {
                todo.push(id);
                out.add_state(acc)
            })
        };
        for &i in &init {
            let acc = self.is_accepting(i);
            let q = node(i, &mut out, &mut todo, acc);
            out.add_initial(q);
        }
        let letters: Vec<(Letter, Cube)> = minterms(self.support).collect();
        while let Some(id) = todo.pop() {
            self.budget.check()?;
            let src = node(id, &mut out, &mut todo, false);
            let mut per_target: HashMap<usize, Vec<Cube>> = HashMap::new();
            for &(l, cube) in &letters {
                for t in self.successors(id, l)? {
                    let acc = self.is_accepting(t);
                    let dst = node(t, &mut out, &mut todo, acc);
                    per_target.entry(dst).or_default().push(cube);
                }
            }
            let mut targets: Vec<_> = per_target.into_iter().collect();
            targets.sort_by_key(|(t, _)| *t);
            for (k, (t, cubes)) in targets.into_iter().enumerate() {
                if k % 4096 == 4095 {
                    self.budget.check()?;
                }
                out.push_distinct_edge(src, Guard::from_cubes(cubes), t);
            }
        }
        Ok(out)
    }
}

impl LazyAutomaton for LazyComplement {
    fn initial(&mut self) -> Vec<usize> {
        let init: Vec<usize> = {
            let mut v = self.nba.initial_states().to_vec();
            v.sort_unstable();
            v
        };
        let m = match self.method {
            ComplementMethod::Deterministic => match init.first() {
                None => Macro::Sink,
                Some(&q) => Macro::Copy(q, false),
            },
            ComplementMethod::Breakpoint => Macro::Breakpoint(init, Vec::new()),
            ComplementMethod::Ncsb => {
                let (n, c): (Vec<usize>, Vec<usize>) = init.into_iter().partition(|&q| !self.part[q]);
                Macro::Ncsb(n, c.clone(), Vec::new(), c)
            }
            ComplementMethod::RankBased => Macro::Waiting(init),
        };
        let mut out = vec![self.intern(m)];
        if self.method == ComplementMethod::Deterministic {
            if let Some(&q) = self.nba.initial_states().first() {
                if !self.nba.is_accepting(q) {
                    out.push(self.intern(Macro::Copy(q, true)));
                }
            }
        }
        out
    }

    fn successors(&mut self, q: usize, letter: Letter) -> Result<Vec<usize>> {
        let key = (q, letter.0 & self.support);
        if let Some(v) = self.cache.get(&key) {
            return Ok(v.clone());
        }
        self.budget.check()?;
        let m = self.states[q].clone();
        let succ = self.compute(&m, Letter(key.1))?;
        let mut ids: Vec<usize> = succ.into_iter().map(|m| self.intern(m)).collect();
        self.budget.check_states(self.states.len())?;
        ids.sort_unstable();
        ids.dedup();
        self.cache.insert(key, ids.clone());
        Ok(ids)
    }

    fn is_accepting(&self, q: usize) -> bool {
        match &self.states[q] {
            Macro::Sink => true,
            Macro::Copy(_, committed) => *committed,
            Macro::Breakpoint(_, o) => o.is_empty(),
            Macro::Ncsb(_, _, _, b) => b.is_empty(),
            Macro::Waiting(_) => false,
            Macro::Ranked(_, _, o) => o.is_empty(),
        }
    }

    fn support(&self) -> u64 {
        self.support
    }
}

/// Largest reachable part tested for universality.
const UNIVERSALITY_PROBE_STATES: usize = 12;
/// Macrostate cap for one universality test.
const UNIVERSALITY_PROBE_LIMIT: usize = 20_000;

/// Turns every state whose language is `Σ^ω` into an accepting state with
/// a `true` self-loop. Only states with a small reachable part are tested,
/// smallest first, by complementing that part under a tight cap. Gives up
/// quietly when the budget runs out.
fn saturate_universal(nba: &Nba, budget: Budget) -> Nba {
    let mut a = nba.clone();
    let reach_of = |a: &Nba, q: usize| reachable(&a.successor_lists(), [q]);
    let mut order: Vec<(usize, usize)> = (0..a.num_states())
        .map(|q| (reach_of(&a, q).iter().filter(|&&r| r).count(), q))
        .filter(|&(size, _)| size <= UNIVERSALITY_PROBE_STATES)
        .collect();
    order.sort_unstable();
    let probe_budget = budget.with_state_limit(UNIVERSALITY_PROBE_LIMIT);
    let mut changed = false;
    for (_, q) in order {
        if budget.check().is_err() {
            break;
        }
        let reach = reach_of(&a, q);
        if !(0..a.num_states()).any(|p| reach[p] && a.accepting[p]) {
            continue;
        }
        let mut sub = a.restrict_states(&reach);
        let local = reach[..q].iter().filter(|&&r| r).count();
        sub.initial = vec![local];
        match LazyComplement::build(&sub, probe_budget, false).materialize() {
            Ok(c) if c.is_empty() => {
                a.edges[q] = vec![Edge {
                    guard: Guard::verum(),
                    target: q,
                }];
                a.accepting[q] = true;
                changed = true;
            }
            Ok(_) | Err(Error::StateLimit(_)) => {}
            Err(_) => break,
        }
    }
    if changed {
        debug!("saturated universal states");
        a.reduce()
    } else {
        a
    }
}

/// All tight level rankings of `states` bounded pointwise by `bound`:
/// accepting states get even ranks, the maximal rank is odd and every odd
/// rank below it is used. The empty set has exactly the empty ranking.
fn tight_rankings(a: &Nba, states: &[usize], bound: &[u32], budget: &Budget) -> Result<Vec<Vec<u32>>> {
    if states.is_empty() {
        return Ok(vec![Vec::new()]);
    }
    let acc: Vec<bool> = states.iter().map(|&q| a.is_accepting(q)).collect();
    let non_acc = acc.iter().filter(|&&x| !x).count() as u32;
    if non_acc == 0 {
        return Ok(Vec::new());
    }
    let mut search = RankSearch {
        acc: &acc,
        caps: Vec::new(),
        cur: vec![0; states.len()],
        used: Vec::new(),
        out: Vec::new(),
        steps: 0,
        budget,
    };
    for m in 1..=non_acc {
        let top = 2 * m - 1;
        search.caps = acc
            .iter()
            .zip(bound)
            .map(|(&is_acc, &b)| {
                let c = b.min(top);
                if is_acc && c % 2 == 1 {
                    c - 1
                } else {
                    c
                }
            })
            .collect();
        // Non-accepting states able to carry an odd rank are needed to
        // cover 1, 3, ..., top.
        let odd_capable = (0..states.len()).filter(|&i| !acc[i] && search.caps[i] >= 1).count() as u32;
        if odd_capable < m || !search.caps.iter().any(|&c| c >= top) {
            continue;
        }
        search.used = vec![0; m as usize];
        search.rec(0)?;
    }
    Ok(search.out)
}

struct RankSearch<'a> {
    acc: &'a [bool],
    caps: Vec<u32>,
    cur: Vec<u32>,
    /// Multiplicity of each odd rank `2k + 1` in the current prefix.
    used: Vec<u32>,
    out: Vec<Vec<u32>>,
    steps: u64,
    budget: &'a Budget,
}

impl RankSearch<'_> {
    fn rec(&mut self, i: usize) -> Result<()> {
        self.steps += 1;
        if self.steps.is_multiple_of(4096) {
            self.budget.check()?;
        }
        let n = self.cur.len();
        let missing = self.used.iter().filter(|&&u| u == 0).count();
        let remaining = (i..n).filter(|&j| !self.acc[j] && self.caps[j] >= 1).count();
        if missing > remaining {
            return Ok(());
        }
        if i == n {
            self.out.push(self.cur.clone());
            self.budget.check_states(self.out.len())?;
            return Ok(());
        }
        for r in 0..=self.caps[i] {
            if self.acc[i] && r % 2 == 1 {
                continue;
            }
            self.cur[i] = r;
            let odd = r % 2 == 1;
            if odd {
                self.used[(r / 2) as usize] += 1;
            }
            self.rec(i + 1)?;
            if odd {
                self.used[(r / 2) as usize] -= 1;
            }
        }
        Ok(())
    }
}

/// Complement with no time limit. Still fails with
/// [`Error::StateLimit`] past the default number of macrostates.
pub fn complement(a: &Nba) -> Result<Nba> {
    complement_with_budget(a, Budget::unlimited())
}

/// Complement over the same alphabet, giving up with
/// [`Error::Timeout`](crate::Error::Timeout) when the budget runs out.
pub fn complement_with_budget(a: &Nba, budget: Budget) -> Result<Nba> {
    let mut lazy = LazyComplement::new(a, budget);
    let out = lazy.materialize()?;
    debug!(
        "complement: {} states -> {} macrostates ({:?})",
        a.num_states(),
        out.num_states(),
        lazy.method()
    );
    out.reduce_with_budget(budget)
}
