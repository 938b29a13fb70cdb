//! Finite reactive systems with an input/output partition.
//!
//! A trace position `i` carries the input letter consumed in step `i`
//! together with the label of the state *entered* by that step. The label
//! of the initial state therefore never appears on a trace.

mod arbiters;

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

pub use arbiters::{make_full, make_spurious, make_unfair};

use crate::alphabet::{Alphabet, Letter};
use crate::automata::{intersect, is_subset, Nba};
use crate::error::{Error, Result};
use crate::guard::{bits, parse_guard, Cube, Guard};
use crate::lasso::LassoWord;

/// A nondeterministic finite state machine `(S, s0, I ⊎ O, δ, l)`.
#[derive(Clone, Debug)]
pub struct System {
    alphabet: Alphabet,
    num_inputs: usize,
    names: Vec<String>,
    labels: Vec<Letter>,
    initial: usize,
    edges: Vec<Vec<(Guard, usize)>>,
}

/// Incremental construction of a [`System`]; validation happens in
/// [`SystemBuilder::build`].
#[derive(Clone, Debug)]
pub struct SystemBuilder {
    inputs: Vec<String>,
    outputs: Vec<String>,
    names: Vec<String>,
    labels: Vec<Vec<String>>,
    initial: Option<usize>,
    edges: Vec<(usize, Guard, usize)>,
}

impl SystemBuilder {
    pub fn new<S: Into<String>>(
        inputs: impl IntoIterator<Item = S>,
        outputs: impl IntoIterator<Item = S>,
    ) -> SystemBuilder {
        SystemBuilder {
            inputs: inputs.into_iter().map(Into::into).collect(),
            outputs: outputs.into_iter().map(Into::into).collect(),
            names: Vec::new(),
            labels: Vec::new(),
            initial: None,
            edges: Vec::new(),
        }
    }

    /// Adds a state labelled with the given outputs; returns its index.
    pub fn state<S: AsRef<str>>(&mut self, name: impl Into<String>, label: &[S]) -> usize {
        self.names.push(name.into());
        self.labels.push(label.iter().map(|s| s.as_ref().to_string()).collect());
        self.names.len() - 1
    }

    pub fn initial(&mut self, state: usize) -> &mut Self {
        self.initial = Some(state);
        self
    }

    /// Adds an edge whose guard is over input indices `0..|I|`.
    pub fn edge(&mut self, from: usize, guard: Guard, to: usize) -> &mut Self {
        self.edges.push((from, guard, to));
        self
    }

    /// Adds an edge with a textual guard over input names.
    pub fn edge_str(&mut self, from: usize, guard: &str, to: usize) -> Result<&mut Self> {
        let g = parse_guard(guard, &[("true", true), ("false", false)], |name| {
            self.inputs.iter().position(|i| i == name).ok_or_else(|| {
                if self.outputs.iter().any(|o| o == name) {
                    Error::InvalidSystem(format!("guard `{guard}` mentions output `{name}`"))
                } else {
                    Error::UnknownAtom(name.to_string())
                }
            })
        })?;
        Ok(self.edge(from, g, to))
    }

    pub fn build(&self) -> Result<System> {
        let sys = self.build_unchecked()?;
        sys.check_input_enabled()?;
        Ok(sys)
    }

    /// Like [`SystemBuilder::build`] but allows states without a successor
    /// for some input letter.
    pub(crate) fn build_unchecked(&self) -> Result<System> {
        for i in &self.inputs {
            if self.outputs.contains(i) {
                return Err(Error::InvalidSystem(format!(
                    "`{i}` is declared both as input and as output"
                )));
            }
        }
        let alphabet = Alphabet::new(self.inputs.iter().chain(&self.outputs).cloned())
            .map_err(|e| Error::InvalidSystem(e.to_string()))?;
        let n = self.names.len();
        if n == 0 {
            return Err(Error::InvalidSystem("system has no states".into()));
        }
        let mut seen = HashSet::new();
        for name in &self.names {
            if !seen.insert(name) {
                return Err(Error::InvalidSystem(format!("duplicate state id `{name}`")));
            }
        }
        let ni = self.inputs.len();
        let mut labels = Vec::with_capacity(n);
        for (name, label) in self.names.iter().zip(&self.labels) {
            let mut l = Letter::EMPTY;
            for o in label {
                let j = self.outputs.iter().position(|x| x == o).ok_or_else(|| {
                    Error::InvalidSystem(format!("label of `{name}` contains `{o}`, which is not an output"))
                })?;
                l = l.with(ni + j, true);
            }
            labels.push(l);
        }
        let initial = self
            .initial
            .ok_or_else(|| Error::InvalidSystem("no initial state".into()))?;
        if initial >= n {
            return Err(Error::InvalidSystem("initial state out of range".into()));
        }
        let input_mask = (1u64 << ni) - 1;
        let mut edges = vec![Vec::<(Guard, usize)>::new(); n];
        for (from, g, to) in &self.edges {
            if *from >= n || *to >= n {
                return Err(Error::InvalidSystem("edge endpoint out of range".into()));
            }
            if g.support() & !input_mask != 0 {
                return Err(Error::InvalidSystem("edge guard mentions non-input symbols".into()));
            }
            if g.is_false() {
                continue;
            }
            match edges[*from].iter_mut().find(|(_, t)| t == to) {
                Some((h, _)) => *h = h.or(g),
                None => edges[*from].push((g.clone(), *to)),
            }
        }
        Ok(System {
            alphabet,
            num_inputs: ni,
            names: self.names.clone(),
            labels,
            initial,
            edges,
        })
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum StateId {
    Name(String),
    Number(i64),
}

impl StateId {
    fn text(&self) -> String {
        match self {
            StateId::Name(s) => s.clone(),
            StateId::Number(n) => n.to_string(),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateFile {
    id: StateId,
    #[serde(default)]
    label: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeFile {
    from: StateId,
    guard: String,
    to: StateId,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SystemFile {
    inputs: Vec<String>,
    outputs: Vec<String>,
    states: Vec<StateFile>,
    initial: StateId,
    edges: Vec<EdgeFile>,
}

/// Input-equivalent completions of an input word, see
/// [`System::complete_trace`].
#[derive(Clone, Debug)]
pub struct Completions {
    pub traces: Vec<LassoWord>,
    /// False when the enumeration stopped at its limit.
    pub exhaustive: bool,
}

impl Completions {
    /// The single completion, if the enumeration found exactly one.
    pub fn unique(&self) -> Option<&LassoWord> {
        (self.exhaustive && self.traces.len() == 1).then(|| &self.traces[0])
    }
}

impl System {
    /// Loads the JSON system format.
    pub fn from_json(text: &str) -> Result<System> {
        let file: SystemFile = serde_json::from_str(text)?;
        let mut b = SystemBuilder::new(file.inputs, file.outputs);
        let mut index = HashMap::new();
        for s in &file.states {
            let id = s.id.text();
            let q = b.state(id.clone(), &s.label);
            index.insert(id, q);
        }
        let lookup = |id: &StateId| {
            index
                .get(&id.text())
                .copied()
                .ok_or_else(|| Error::InvalidSystem(format!("unknown state `{}`", id.text())))
        };
        b.initial(lookup(&file.initial)?);
        for e in &file.edges {
            let (from, to) = (lookup(&e.from)?, lookup(&e.to)?);
            b.edge_str(from, &e.guard, to)?;
        }
        b.build()
    }

    pub fn to_json(&self) -> String {
        let name = |i: usize| self.alphabet.name(i).to_string();
        let file = SystemFile {
            inputs: self.inputs().to_vec(),
            outputs: self.outputs().to_vec(),
            states: (0..self.num_states())
                .map(|q| StateFile {
                    id: StateId::Name(self.names[q].clone()),
                    label: bits(self.labels[q].0).map(name).collect(),
                })
                .collect(),
            initial: StateId::Name(self.names[self.initial].clone()),
            edges: (0..self.num_states())
                .flat_map(|q| {
                    self.edges[q].iter().map(move |(g, t)| EdgeFile {
                        from: StateId::Name(self.names[q].clone()),
                        guard: g.display_with(name).to_string(),
                        to: StateId::Name(self.names[*t].clone()),
                    })
                })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("system serializes")
    }

    fn check_input_enabled(&self) -> Result<()> {
        let mut seen = vec![false; self.num_states()];
        let mut todo = vec![self.initial];
        seen[self.initial] = true;
        while let Some(q) = todo.pop() {
            let cover = self.edges[q].iter().fold(Guard::falsum(), |acc, (g, _)| acc.or(g));
            let missing = cover.not();
            if let Some(l) = missing.pick_letter() {
                return Err(Error::NotInputEnabled {
                    state: self.names[q].clone(),
                    letter: self.alphabet.format_letter(l),
                });
            }
            for (_, t) in &self.edges[q] {
                if !seen[*t] {
                    seen[*t] = true;
                    todo.push(*t);
                }
            }
        }
        Ok(())
    }

    /// `I` followed by `O`.
    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn inputs(&self) -> &[String] {
        &self.alphabet.symbols()[..self.num_inputs]
    }

    pub fn outputs(&self) -> &[String] {
        &self.alphabet.symbols()[self.num_inputs..]
    }

    pub fn input_mask(&self) -> u64 {
        (1u64 << self.num_inputs) - 1
    }

    pub fn output_mask(&self) -> u64 {
        self.alphabet.full_mask() & !self.input_mask()
    }

    pub fn num_states(&self) -> usize {
        self.names.len()
    }

    pub fn state_name(&self, q: usize) -> &str {
        &self.names[q]
    }

    /// Outputs of a state, as a letter over [`System::alphabet`].
    pub fn label(&self, q: usize) -> Letter {
        self.labels[q]
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    /// Guarded edges of a state; guards range over the input symbols.
    pub fn edges(&self, q: usize) -> &[(Guard, usize)] {
        &self.edges[q]
    }

    /// `δ(q, A)` for the inputs of `letter`.
    pub fn successors(&self, q: usize, letter: Letter) -> impl Iterator<Item = usize> + '_ {
        let l = letter.restrict(self.input_mask());
        self.edges[q].iter().filter(move |(g, _)| g.admits(l)).map(|(_, t)| *t)
    }

    /// Every state is accepting; an edge `s -> s'` reads its input guard
    /// together with exactly the label of `s'`.
    pub fn trace_language(&self) -> Nba {
        let mut a = Nba::new(self.alphabet.clone());
        for _ in 0..self.num_states() {
            a.add_state(true);
        }
        a.add_initial(self.initial);
        let om = self.output_mask();
        for q in 0..self.num_states() {
            for (g, t) in &self.edges[q] {
                a.add_edge(q, g.and_cube(Cube::exact(self.labels[*t], om)), *t);
            }
        }
        a
    }

    fn check_alphabet(&self, w: &LassoWord) -> Result<()> {
        let full = self.alphabet.full_mask();
        if (0..w.len()).any(|i| w.letter(i).0 & !full != 0) {
            return Err(Error::AlphabetMismatch(
                "trace mentions symbols outside the system alphabet".into(),
            ));
        }
        Ok(())
    }

    /// Whether `pi` is a trace of the system.
    pub fn validate_trace(&self, pi: &LassoWord) -> Result<bool> {
        self.check_alphabet(pi)?;
        Ok(self.trace_language().accepts_lasso(pi))
    }

    /// Enumerates system traces that agree with `rho` on the inputs,
    /// following simple cycles of the product of the system with the
    /// positions of `rho`. Stops after `limit` distinct traces.
    pub fn complete_trace(&self, rho: &LassoWord, limit: usize) -> Completions {
        let im = self.input_mask();
        let mut found: Vec<LassoWord> = Vec::new();
        let mut canon: HashSet<LassoWord> = HashSet::new();
        let mut exhaustive = true;
        // Iterative DFS over simple paths of (state, position) nodes.
        let mut path: Vec<(usize, usize)> = vec![(self.initial, 0)];
        let mut letters: Vec<Letter> = Vec::new();
        let mut on_path: HashMap<(usize, usize), usize> = HashMap::from([((self.initial, 0), 0)]);
        let mut iters: Vec<Vec<usize>> = vec![self.successors(self.initial, rho.letter(0)).collect()];
        while let Some(choices) = iters.last_mut() {
            let Some(t) = choices.pop() else {
                iters.pop();
                let node = path.pop().unwrap();
                on_path.remove(&node);
                letters.pop();
                continue;
            };
            let (_, pos) = *path.last().unwrap();
            let letter = Letter(rho.letter(pos).0 & im | self.labels[t].0);
            let next = (t, rho.succ(pos));
            if let Some(&at) = on_path.get(&next) {
                let mut all = letters.clone();
                all.push(letter);
                let w = LassoWord::new(all[..at].to_vec(), all[at..].to_vec()).unwrap();
                if canon.insert(w.canonical()) {
                    if found.len() >= limit {
                        exhaustive = false;
                        break;
                    }
                    found.push(w);
                }
                continue;
            }
            on_path.insert(next, path.len());
            path.push(next);
            letters.push(letter);
            iters.push(self.successors(t, rho.letter(next.1)).collect());
        }
        Completions {
            traces: found,
            exhaustive,
        }
    }

    /// Whether every system trace with the inputs of `pi` equals `pi`.
    pub fn is_deterministic_trace(&self, pi: &LassoWord) -> Result<bool> {
        if !self.validate_trace(pi)? {
            return Err(Error::InvalidTrace(pi.display(&self.alphabet)));
        }
        let im = self.input_mask();
        let mut same_inputs = Nba::new(self.alphabet.clone());
        for _ in 0..pi.len() {
            same_inputs.add_state(true);
        }
        same_inputs.add_initial(0);
        for i in 0..pi.len() {
            same_inputs.add_edge(i, Guard::cube(Cube::exact(pi.letter(i), im)), pi.succ(i));
        }
        let candidates = intersect(&self.trace_language(), &same_inputs)?;
        is_subset(&candidates, &Nba::singleton(self.alphabet.clone(), pi))
    }

    /// The counterfactual automaton of the system for the trace `pi`.
    ///
    /// States are pairs `(s, n)` with `n` a position of `pi`. Every output
    /// `o` gets a contingency input named `o_C` (made unique against the
    /// existing names). A step from `(s, n)` on inputs `Y` may enter
    /// `(s', succ(n))` when some `s'' ∈ δ(s, Y|I)` agrees with `s'` on all
    /// outputs without a raised contingency, while outputs with a raised
    /// contingency take their value at position `n` of `pi`.
    ///
    /// The result need not be input-enabled: a raised contingency may ask
    /// for a combination of outputs that no state carries.
    pub fn counterfactual_automaton(&self, pi: &LassoWord) -> Result<System> {
        if !self.validate_trace(pi)? {
            return Err(Error::InvalidTrace(pi.display(&self.alphabet)));
        }
        let ni = self.num_inputs;
        let no = self.outputs().len();
        let mut taken: HashSet<String> = self.alphabet.symbols().iter().cloned().collect();
        let mut cont_names = Vec::with_capacity(no);
        for o in self.outputs() {
            let mut name = format!("{o}_C");
            let mut k = 1;
            while taken.contains(&name) {
                name = format!("{o}_C{k}");
                k += 1;
            }
            taken.insert(name.clone());
            cont_names.push(name);
        }
        let inputs: Vec<String> = self.inputs().iter().cloned().chain(cont_names).collect();
        let mut b = SystemBuilder::new(inputs, self.outputs().to_vec());
        let len = pi.len();
        let node = |s: usize, n: usize| s * len + n;
        for s in 0..self.num_states() {
            for n in 0..len {
                let label: Vec<String> = bits(self.labels[s].0)
                    .map(|i| self.alphabet.name(i).to_string())
                    .collect();
                b.state(format!("{}#{n}", self.names[s]), &label);
            }
        }
        b.initial(node(self.initial, 0));
        let om = self.output_mask();
        for s in 0..self.num_states() {
            for n in 0..len {
                let actual = pi.letter(n).0 & om;
                for (g, s2) in &self.edges[s] {
                    // `raised` holds output bits (system numbering) whose
                    // contingency input is set.
                    for raised in crate::alphabet::submasks(om) {
                        let wanted = (actual & raised) | (self.labels[*s2].0 & !raised & om);
                        let mut cont = Cube::TOP;
                        for j in 0..no {
                            cont = cont.and(Cube::literal(ni + j, raised >> (ni + j) & 1 == 1)).unwrap();
                        }
                        let guard = g.and_cube(cont);
                        for t in 0..self.num_states() {
                            if self.labels[t].0 & om == wanted {
                                b.edge(node(s, n), guard.clone(), node(t, pi.succ(n)));
                            }
                        }
                    }
                }
            }
        }
        b.build_unchecked()
    }
}
