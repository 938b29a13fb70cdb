//! Cause synthesis and cause checking.
//!
//! For an actual trace `π`, the cause is the set `D` of input sequences
//! `ρ` such that every system trace `σ` with `σ ≤_π ρ` satisfies the
//! effect. The pipeline builds an automaton for the complement of `D` and
//! complements it:
//!
//! 1. lift the relation to the zipped alphabet with outputs;
//! 2. tag the (negated) effect onto the closer trace `t1`;
//! 3. intersect them, giving `A_∩`;
//! 4. resolve `t1` against the system, giving `A_×` over `t0`/`t2`;
//! 5. fix `t0` to the positions of `π`, giving an automaton over the
//!    inputs for the complement of `D`;
//! 6. complement that automaton, giving `A_D`.
//!
//! Fixing `t0` before complementing yields the same language as the
//! other order, because `t0` is read deterministically along `π`; the
//! automaton to complement is then much smaller and has a much smaller
//! alphabet.

use std::collections::HashMap;
use std::time::Instant;

use log::{debug, info};
use serde::Serialize;

use crate::alphabet::{submasks, Alphabet, Letter};
use crate::automata::{
    complement_with_budget, inclusion_witness, intersect_with_budget, remap_alphabet, ComplementMethod, Inclusion,
    LazyComplement, Nba, SymbolMap,
};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::guard::{bits, Cube, Guard};
use crate::lasso::LassoWord;
use crate::ltl::{eval_on_lasso, ltl_to_nba, Ltl};
use crate::similarity::{lift_relation, tagged, untag, zipped_alphabet, SimilarityRelation, Tag};
use crate::system::System;

/// An ω-regular property given either as a formula or as an automaton.
#[derive(Clone, Debug)]
pub enum Property {
    Formula(Ltl),
    Automaton(Nba),
}

impl Property {
    /// Automaton for the property over `alphabet`. Automaton symbols are
    /// matched by name; symbols of `alphabet` the automaton does not
    /// mention are unconstrained.
    pub fn to_nba(&self, alphabet: &Alphabet) -> Result<Nba> {
        match self {
            Property::Formula(f) => ltl_to_nba(f, alphabet),
            Property::Automaton(a) => onto(a, alphabet),
        }
    }

    /// Automaton for the complement of the property over `alphabet`.
    pub fn negated_nba(&self, alphabet: &Alphabet, budget: Budget) -> Result<Nba> {
        match self {
            Property::Formula(f) => ltl_to_nba(&f.clone().not(), alphabet),
            Property::Automaton(a) => complement_with_budget(&onto(a, alphabet)?, budget),
        }
    }

    pub fn holds_on(&self, alphabet: &Alphabet, word: &LassoWord) -> Result<bool> {
        match self {
            Property::Formula(f) => eval_on_lasso(f, alphabet, word),
            Property::Automaton(a) => Ok(onto(a, alphabet)?.accepts_lasso(word)),
        }
    }
}

fn onto(a: &Nba, alphabet: &Alphabet) -> Result<Nba> {
    if a.alphabet() == alphabet {
        return Ok(a.clone());
    }
    for s in a.alphabet().symbols() {
        if !alphabet.contains(s) {
            return Err(Error::AlphabetMismatch(format!(
                "automaton symbol `{s}` is not in {alphabet}"
            )));
        }
    }
    remap_alphabet(a, alphabet, |s| SymbolMap::Rename(s.to_string()))
}

/// Knobs shared by synthesis and checking.
#[derive(Clone, Copy, Debug, Default)]
pub struct Options {
    /// Replace the system by its counterfactual automaton for `π`.
    pub contingencies: bool,
    pub budget: Budget,
}

/// Size and duration of one pipeline stage.
#[derive(Clone, Debug, Serialize)]
pub struct Stage {
    pub name: &'static str,
    pub states: usize,
    pub millis: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Diagnostics {
    pub stages: Vec<Stage>,
    /// Number of stored positions of the actual trace.
    pub trace_positions: usize,
    /// Construction used for the complementation step.
    pub complement_method: String,
    /// Whether the actual trace satisfies the effect at all.
    pub effect_on_trace: bool,
}

impl Diagnostics {
    pub fn stage(&self, name: &str) -> Option<&Stage> {
        self.stages.iter().find(|s| s.name == name)
    }

    pub fn total_millis(&self) -> f64 {
        self.stages.iter().map(|s| s.millis).sum()
    }
}

#[derive(Clone, Debug)]
pub enum Verdict {
    /// The unique cause, over the system inputs.
    Cause(Nba),
    NoCause,
}

#[derive(Clone, Debug)]
pub struct CauseResult {
    pub verdict: Verdict,
    pub diagnostics: Diagnostics,
}

impl CauseResult {
    pub fn cause(&self) -> Option<&Nba> {
        match &self.verdict {
            Verdict::Cause(a) => Some(a),
            Verdict::NoCause => None,
        }
    }
}

/// Which inclusion between candidate and cause fails.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// The witness is accepted by the candidate but is not in the cause.
    TooLarge,
    /// The witness is in the cause but rejected by the candidate.
    TooSmall,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckVerdict {
    IsCause,
    NotCause { direction: Direction, witness: LassoWord },
    NoCauseExists,
}

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub verdict: CheckVerdict,
    pub synthesis: CauseResult,
}

/// Rewrites an automaton over `2^AP` onto the closer trace `t1` of the
/// zipped alphabet of `inputs` and `outputs`.
pub fn tag_effect<S: AsRef<str>>(effect: &Nba, inputs: &[S], outputs: &[S]) -> Result<Nba> {
    let target = zipped_alphabet(inputs, outputs)?;
    for s in effect.alphabet().symbols() {
        if !target.contains(&tagged(s, Tag::T1)) {
            return Err(Error::AlphabetMismatch(format!(
                "effect symbol `{s}` is neither an input nor an output"
            )));
        }
    }
    remap_alphabet(effect, &target, |s| SymbolMap::Rename(tagged(s, Tag::T1)))
}

/// `A_∩ = A_≤ ∩ complement(A_E)`.
pub fn build_intersection(lifted_relation: &Nba, tagged_effect: &Nba, budget: Budget) -> Result<Nba> {
    let neg = complement_with_budget(tagged_effect, budget)?;
    intersect_with_budget(lifted_relation, &neg, budget)
}

/// Inputs and outputs of a zipped alphabet, in declaration order.
fn zipped_parts(z: &Alphabet) -> (Vec<String>, Vec<String>) {
    let inputs: Vec<String> = z
        .symbols()
        .iter()
        .filter_map(|s| untag(s).filter(|(_, t)| *t == Tag::T2).map(|(b, _)| b.to_string()))
        .collect();
    let outputs = z
        .symbols()
        .iter()
        .filter_map(|s| untag(s).filter(|(_, t)| *t == Tag::T0).map(|(b, _)| b.to_string()))
        .filter(|b| !inputs.contains(b))
        .collect();
    (inputs, outputs)
}

/// The alphabet `2^((I × {t0,t2}) ∪ (O × {t0}))` of `A_×`.
pub fn reduced_alphabet<S: AsRef<str>>(inputs: &[S], outputs: &[S]) -> Result<Alphabet> {
    let mut names: Vec<String> = inputs.iter().map(|i| tagged(i.as_ref(), Tag::T0)).collect();
    names.extend(outputs.iter().map(|o| tagged(o.as_ref(), Tag::T0)));
    names.extend(inputs.iter().map(|i| tagged(i.as_ref(), Tag::T2)));
    Alphabet::new(names)
}

/// Product of `A_∩` with the system: the closer trace is resolved to a
/// trace of `system` and projected away. System inputs that are not
/// inputs of the zipped alphabet (contingency inputs) are quantified
/// existentially as well.
pub fn system_product(a_cap: &Nba, system: &System, budget: Budget) -> Result<Nba> {
    let z = a_cap.alphabet();
    let (inputs, outputs) = zipped_parts(z);
    for i in &inputs {
        if !system.inputs().contains(i) {
            return Err(Error::AlphabetMismatch(format!("`{i}` is not a system input")));
        }
    }
    let mut sys_outputs = system.outputs().to_vec();
    let mut zip_outputs = outputs.clone();
    sys_outputs.sort();
    zip_outputs.sort();
    if sys_outputs != zip_outputs {
        return Err(Error::AlphabetMismatch(format!(
            "system outputs {:?} differ from the zipped outputs {:?}",
            system.outputs(),
            outputs
        )));
    }
    let sab = system.alphabet();
    let ni = system.inputs().len();
    let extra = system.inputs().iter().filter(|i| !inputs.contains(i)).count();
    if z.len() + extra > 64 {
        return Err(Error::TooManySymbols(z.len() + extra));
    }

    // System input k becomes `k@t1`, or a fresh symbol past the zipped
    // alphabet when it is a contingency input.
    let mut sys_var = vec![0usize; ni];
    let mut quantified = 0u64;
    let mut fresh = z.len();
    for (k, name) in system.inputs().iter().enumerate() {
        sys_var[k] = match z.index_of(&tagged(name, Tag::T1)) {
            Some(v) => v,
            None => {
                fresh += 1;
                fresh - 1
            }
        };
        quantified |= 1 << sys_var[k];
    }
    let mut out_t1 = 0u64;
    let mut label_z = vec![Letter::EMPTY; system.num_states()];
    for (j, o) in system.outputs().iter().enumerate() {
        let v = z.index_of(&tagged(o, Tag::T1)).expect("zipped output");
        out_t1 |= 1 << v;
        for (s, l) in label_z.iter_mut().enumerate() {
            if system.label(s).contains(ni + j) {
                *l = l.with(v, true);
            }
        }
    }
    let rx = reduced_alphabet(&inputs, &outputs)?;
    let to_rx: Vec<usize> = z
        .symbols()
        .iter()
        .map(|s| rx.index_of(s).unwrap_or(usize::MAX))
        .collect();
    debug_assert!(sab.len() >= ni);
    let sys_edges: Vec<Vec<(Guard, usize)>> = (0..system.num_states())
        .map(|s| {
            system
                .edges(s)
                .iter()
                .map(|(g, t)| (g.map_vars(|v| sys_var[v]), *t))
                .collect()
        })
        .collect();

    let mut out = Nba::new(rx);
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut todo: Vec<(usize, usize)> = Vec::new();
    let mut node = |key: (usize, usize), out: &mut Nba, todo: &mut Vec<(usize, usize)>| {
        *index.entry(key).or_insert_with(|| {
            todo.push(key);
            out.add_state(a_cap.is_accepting(key.1))
        })
    };
    for &q in a_cap.initial_states() {
        let id = node((system.initial(), q), &mut out, &mut todo);
        out.add_initial(id);
    }
    while let Some((s, q)) = todo.pop() {
        budget.check()?;
        let src = node((s, q), &mut out, &mut todo);
        for (gs, s2) in &sys_edges[s] {
            for e in a_cap.edges(q) {
                let g = e.guard.restrict(out_t1, label_z[*s2]).and(gs).exists(quantified);
                if g.is_false() {
                    continue;
                }
                let g = g.map_vars(|v| to_rx[v]);
                let dst = node((*s2, e.target), &mut out, &mut todo);
                out.add_edge(src, g, dst);
            }
        }
    }
    Ok(out)
}

/// Product of an automaton over the reduced alphabet with the positions
/// of `pi`: `t0` is fixed to the letters of `pi` and `t2` becomes the
/// plain input alphabet `cause_ab`.
fn trace_product_with_budget(
    a_bar: &Nba,
    pi: &LassoWord,
    pi_ab: &Alphabet,
    cause_ab: &Alphabet,
    budget: Budget,
) -> Result<Nba> {
    let rx = a_bar.alphabet();
    let t0: Vec<(usize, usize)> = pi_ab
        .symbols()
        .iter()
        .enumerate()
        .filter_map(|(i, s)| rx.index_of(&tagged(s, Tag::T0)).map(|j| (i, j)))
        .collect();
    let mut t2_mask = 0u64;
    let mut t2_to_cause = HashMap::new();
    for (k, s) in cause_ab.symbols().iter().enumerate() {
        let j = rx
            .index_of(&tagged(s, Tag::T2))
            .ok_or_else(|| Error::AlphabetMismatch(format!("`{s}` has no t2 symbol")))?;
        t2_mask |= 1 << j;
        t2_to_cause.insert(j, k);
    }
    let t2_mask = t2_mask & a_bar.support();
    let fixed: Vec<Letter> = (0..pi.len())
        .map(|p| {
            let src = pi.letter(p);
            t0.iter()
                .filter(|&&(i, _)| src.contains(i))
                .fold(Letter::EMPTY, |l, &(_, j)| l.with(j, true))
        })
        .collect();
    let choices: Vec<(u64, Cube)> = submasks(t2_mask)
        .map(|m| {
            let cube = bits(t2_mask).fold(Cube::TOP, |c, v| {
                c.and(Cube::literal(t2_to_cause[&v], m >> v & 1 == 1)).unwrap()
            });
            (m, cube)
        })
        .collect();

    let mut out = Nba::new(cause_ab.clone());
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut todo: Vec<(usize, usize)> = Vec::new();
    for &q in a_bar.initial_states() {
        let id = *index.entry((0, q)).or_insert_with(|| {
            todo.push((0, q));
            out.add_state(a_bar.is_accepting(q))
        });
        out.add_initial(id);
    }
    while let Some((p, q)) = todo.pop() {
        budget.check()?;
        let src = index[&(p, q)];
        let np = pi.succ(p);
        let mut per_target: HashMap<usize, Vec<Cube>> = HashMap::new();
        for &(m, cube) in &choices {
            for t in a_bar.successors(q, Letter(fixed[p].0 | m)) {
                let dst = match index.get(&(np, t)) {
                    Some(&d) => d,
                    None => {
                        let d = out.add_state(a_bar.is_accepting(t));
                        index.insert((np, t), d);
                        todo.push((np, t));
                        d
                    }
                };
                per_target.entry(dst).or_default().push(cube);
            }
        }
        let mut targets: Vec<_> = per_target.into_iter().collect();
        targets.sort_by_key(|(t, _)| *t);
        for (t, cubes) in targets {
            out.add_edge(src, Guard::from_cubes(cubes), t);
        }
    }
    Ok(out)
}

/// Product of `a_bar` (over the reduced alphabet) with the positions of
/// the lasso `pi` (over `pi_alphabet`). The result reads the `t2`
/// component as a word over `cause_alphabet`; its states are pairs of a
/// trace position and a state of `a_bar`.
pub fn trace_product(a_bar: &Nba, pi: &LassoWord, pi_alphabet: &Alphabet, cause_alphabet: &Alphabet) -> Result<Nba> {
    trace_product_with_budget(a_bar, pi, pi_alphabet, cause_alphabet, Budget::unlimited())
}

struct Run {
    result: CauseResult,
    /// Automaton for the complement of the cause, over the inputs.
    not_cause: Nba,
    cause_alphabet: Alphabet,
}

struct Clock {
    stages: Vec<Stage>,
    last: Instant,
}

impl Clock {
    fn new() -> Clock {
        Clock {
            stages: Vec::new(),
            last: Instant::now(),
        }
    }

    fn lap(&mut self, name: &'static str, states: usize) {
        let now = Instant::now();
        let millis = (now - self.last).as_secs_f64() * 1e3;
        info!("stage {name}: {states} states, {millis:.1} ms");
        self.stages.push(Stage { name, states, millis });
        self.last = now;
    }
}

fn check_relation(system: &System, rel: &SimilarityRelation) -> Result<()> {
    let mut a = system.inputs().to_vec();
    let mut b = rel.inputs().to_vec();
    a.sort();
    b.sort();
    if a != b {
        return Err(Error::AlphabetMismatch(format!(
            "relation `{}` ranges over inputs {:?}, the system has {:?}",
            rel.name,
            rel.inputs(),
            system.inputs()
        )));
    }
    Ok(())
}

fn run(system: &System, pi: &LassoWord, effect: &Property, rel: &SimilarityRelation, opts: Options) -> Result<Run> {
    if !system.validate_trace(pi)? {
        return Err(Error::InvalidTrace(format!(
            "{} is not a trace of the system",
            pi.display(system.alphabet())
        )));
    }
    check_relation(system, rel)?;
    let ab = system.alphabet();
    let budget = opts.budget;
    let effect_on_trace = effect.holds_on(ab, pi)?;
    if !effect_on_trace {
        info!("the effect does not hold on the actual trace");
    }
    let mut clock = Clock::new();

    let lifted = lift_relation(rel, system.outputs())?;
    clock.lap("relation", lifted.num_states());

    let effect_nba = effect.to_nba(ab)?;
    clock.lap("effect", effect_nba.num_states());

    let negated = effect.negated_nba(ab, budget)?;
    let tagged_neg = tag_effect(&negated, rel.inputs(), system.outputs())?;
    let a_cap = intersect_with_budget(&lifted, &tagged_neg, budget)?.reduce_with_budget(budget)?;
    clock.lap("intersection", a_cap.num_states());

    let target = if opts.contingencies {
        system.counterfactual_automaton(pi)?
    } else {
        system.clone()
    };
    let a_times = system_product(&a_cap, &target, budget)?.reduce_with_budget(budget)?;
    clock.lap("system_product", a_times.num_states());

    let cause_ab = Alphabet::new(system.inputs().iter().cloned())?;
    let not_cause = trace_product_with_budget(&a_times, pi, ab, &cause_ab, budget)?.reduce_with_budget(budget)?;
    clock.lap("trace_product", not_cause.num_states());

    let mut lazy = LazyComplement::new(&not_cause, budget);
    let a_d = lazy.materialize()?;
    clock.lap("complement", a_d.num_states());
    let method = lazy.method();
    debug!("complement used {method:?}");
    let a_d = a_d.reduce_with_budget(budget)?;
    clock.lap("cause", a_d.num_states());

    let verdict = if a_d.is_empty() {
        Verdict::NoCause
    } else {
        Verdict::Cause(a_d)
    };
    Ok(Run {
        result: CauseResult {
            verdict,
            diagnostics: Diagnostics {
                stages: clock.stages,
                trace_positions: pi.len(),
                complement_method: match method {
                    ComplementMethod::Deterministic => "deterministic",
                    ComplementMethod::Breakpoint => "breakpoint",
                    ComplementMethod::Ncsb => "ncsb",
                    ComplementMethod::RankBased => "rank-based",
                }
                .to_string(),
                effect_on_trace,
            },
        },
        not_cause,
        cause_alphabet: cause_ab,
    })
}

/// Synthesizes the cause of `effect` on the trace `pi` of `system` under
/// the similarity relation `rel`. `pi` ranges over the system's inputs
/// and outputs; the cause ranges over its inputs.
pub fn synthesize_cause(
    system: &System,
    pi: &LassoWord,
    effect: &Property,
    rel: &SimilarityRelation,
    opts: Options,
) -> Result<CauseResult> {
    Ok(run(system, pi, effect, rel, opts)?.result)
}

/// Synthesizes the cause and compares it with `candidate` (over the
/// system inputs) by language equivalence.
pub fn check_cause(
    system: &System,
    pi: &LassoWord,
    effect: &Property,
    rel: &SimilarityRelation,
    candidate: &Property,
    opts: Options,
) -> Result<CheckResult> {
    let run = run(system, pi, effect, rel, opts)?;
    let cand = candidate.to_nba(&run.cause_alphabet)?;
    let verdict = match &run.result.verdict {
        Verdict::NoCause => CheckVerdict::NoCauseExists,
        Verdict::Cause(cause) => {
            let too_large = intersect_with_budget(&cand, &run.not_cause, opts.budget)?;
            if let crate::automata::Emptiness::NonEmpty(w) = too_large.emptiness() {
                CheckVerdict::NotCause {
                    direction: Direction::TooLarge,
                    witness: w.canonical(),
                }
            } else {
                match inclusion_witness(cause, &cand, opts.budget)? {
                    Inclusion::Holds => CheckVerdict::IsCause,
                    Inclusion::Fails(w) => CheckVerdict::NotCause {
                        direction: Direction::TooSmall,
                        witness: w.canonical(),
                    },
                }
            }
        }
    };
    Ok(CheckResult {
        verdict,
        synthesis: run.result,
    })
}
