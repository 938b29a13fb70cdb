//! Brute-force validation of causes at bounded scale.
//!
//! Every check quantifies over a [`BoundedUniverse`] of input lassos
//! instead of all input sequences. A `Pass` therefore only says that no
//! bounded counterexample exists, while a `Fail` always carries concrete
//! witnesses. Where the inner search of a check is finite by construction
//! (relations that refine the subset relation and farther traces with
//! finitely many changes), it is carried out exhaustively, which makes
//! `Fail` sound.
//!
//! Input words are represented over the system alphabet with all output
//! bits cleared. Because system inputs come first, the same letters are
//! valid over the input-only alphabet of a cause.

use std::collections::{HashMap, HashSet};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::alphabet::{submasks, Alphabet, Letter};
use crate::automata::{intersect, remap_alphabet, Emptiness, Nba, SymbolMap};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::guard::{Cube, Guard};
use crate::lasso::{common_shape, LassoWord};
use crate::similarity::SimilarityRelation;
use crate::synthesis::Property;
use crate::system::System;

/// Completions enumerated per input word before giving up.
pub const COMPLETION_LIMIT: usize = 256;
/// Largest exact candidate set enumerated for a single farther trace.
pub const CANDIDATE_LIMIT: usize = 4096;

/// All lassos over `2^alphabet` with a stem of at most `stem_bound`
/// letters and a loop of between 1 and `loop_bound` letters, optionally
/// thinned to a seeded random sample.
#[derive(Clone, Debug)]
pub struct BoundedUniverse {
    alphabet: Alphabet,
    stem_bound: usize,
    loop_bound: usize,
    sample_cap: Option<usize>,
    seed: u64,
}

impl BoundedUniverse {
    pub fn new(alphabet: Alphabet, stem_bound: usize, loop_bound: usize) -> Result<Self> {
        if loop_bound == 0 {
            return Err(Error::InvalidArgument("the loop bound must be at least 1".into()));
        }
        if alphabet.len() >= 16 {
            return Err(Error::InvalidArgument(format!(
                "bounded enumeration over {} propositions is not supported",
                alphabet.len()
            )));
        }
        Ok(BoundedUniverse {
            alphabet,
            stem_bound,
            loop_bound,
            sample_cap: None,
            seed: 0,
        })
    }

    /// Limits [`BoundedUniverse::members`] to `cap` lassos drawn with a
    /// ChaCha generator seeded by `seed`.
    pub fn with_sample_cap(mut self, cap: usize, seed: u64) -> Self {
        self.sample_cap = Some(cap);
        self.seed = seed;
        self
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn stem_bound(&self) -> usize {
        self.stem_bound
    }

    pub fn loop_bound(&self) -> usize {
        self.loop_bound
    }

    fn shapes(&self) -> Vec<(usize, usize)> {
        let mut shapes: Vec<(usize, usize)> = (0..=self.stem_bound)
            .flat_map(|s| (1..=self.loop_bound).map(move |l| (s, l)))
            .collect();
        shapes.sort_by_key(|&(s, l)| (s + l, s));
        shapes
    }

    fn shape_count(&self, s: usize, l: usize) -> u128 {
        let bits = (self.alphabet.len() * (s + l)) as u32;
        1u128.checked_shl(bits).unwrap_or(u128::MAX)
    }

    /// Number of syntactically distinct lassos in the universe, saturating.
    pub fn count(&self) -> u128 {
        self.shapes()
            .into_iter()
            .fold(0u128, |acc, (s, l)| acc.saturating_add(self.shape_count(s, l)))
    }

    /// Whether [`BoundedUniverse::members`] returns every lasso.
    pub fn is_exhaustive(&self) -> bool {
        self.sample_cap.is_none_or(|cap| self.count() <= cap as u128)
    }

    /// Every lasso when the universe fits the sample cap, otherwise a
    /// deterministic sample of exactly `cap` distinct lassos.
    pub fn members(&self) -> Vec<LassoWord> {
        match self.sample_cap {
            Some(cap) if !self.is_exhaustive() => self.sample(cap),
            _ => enumerate_lassos(self).collect(),
        }
    }

    fn sample(&self, cap: usize) -> Vec<LassoWord> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let shapes = self.shapes();
        let weights: Vec<f64> = shapes.iter().map(|&(s, l)| self.shape_count(s, l) as f64).collect();
        let total: f64 = weights.iter().sum();
        let letters = 1u64 << self.alphabet.len();
        let mut seen = HashSet::new();
        let mut out = Vec::with_capacity(cap);
        while out.len() < cap {
            let mut x = rng.gen::<f64>() * total;
            let mut pick = shapes[shapes.len() - 1];
            for (shape, w) in shapes.iter().zip(&weights) {
                if x < *w {
                    pick = *shape;
                    break;
                }
                x -= w;
            }
            let (s, l) = pick;
            let mut draw = |n: usize| (0..n).map(|_| Letter(rng.gen_range(0..letters))).collect::<Vec<_>>();
            let stem = draw(s);
            let cycle = draw(l);
            let w = LassoWord::new(stem, cycle).expect("nonempty loop");
            if seen.insert(w.clone()) {
                out.push(w);
            }
        }
        out
    }
}

/// Streams every lasso of the universe, ordered by total length, then
/// stem length, then letters. Sampling caps are ignored.
pub fn enumerate_lassos(u: &BoundedUniverse) -> impl Iterator<Item = LassoWord> + '_ {
    let letters = 1u64 << u.alphabet.len();
    u.shapes().into_iter().flat_map(move |(s, l)| {
        let n = s + l;
        let mut digits = vec![0u64; n];
        let mut done = false;
        std::iter::from_fn(move || {
            if done {
                return None;
            }
            let w = LassoWord::new(
                digits[..s].iter().map(|&d| Letter(d)).collect(),
                digits[s..].iter().map(|&d| Letter(d)).collect(),
            )
            .expect("nonempty loop");
            // Advance the counter, most significant digit first.
            done = true;
            for d in digits.iter_mut().rev() {
                *d += 1;
                if *d < letters {
                    done = false;
                    break;
                }
                *d = 0;
            }
            Some(w)
        })
    })
}

/// The positions where two words differ, as an eventually periodic set of
/// `(symbol, index)` pairs. Stored as a lasso of difference masks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Changes(LassoWord);

/// `{(a, i) | a ∈ π0[i] xor a ∈ π1[i]}`.
pub fn changes(pi0: &LassoWord, pi1: &LassoWord) -> Changes {
    let (s, p) = common_shape([pi0, pi1]);
    let a = pi0.unroll(s, p);
    let b = pi1.unroll(s, p);
    let diff =
        |x: &[Letter], y: &[Letter]| -> Vec<Letter> { x.iter().zip(y).map(|(l, r)| Letter(l.0 ^ r.0)).collect() };
    let w = LassoWord::new(diff(a.stem(), b.stem()), diff(a.cycle(), b.cycle())).expect("nonempty loop");
    Changes(w.canonical())
}

impl Changes {
    /// The difference masks as a lasso.
    pub fn masks(&self) -> &LassoWord {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.cycle().iter().chain(self.0.stem()).all(|l| l.0 == 0)
    }

    pub fn is_finite(&self) -> bool {
        self.0.cycle().iter().all(|l| l.0 == 0)
    }

    pub fn contains(&self, symbol: usize, index: usize) -> bool {
        self.0.at(index).contains(symbol)
    }

    /// Pairs before the periodic part starts.
    pub fn transient(&self) -> Vec<(usize, usize)> {
        self.0
            .stem()
            .iter()
            .enumerate()
            .flat_map(|(i, l)| crate::guard::bits(l.0).map(move |a| (a, i)))
            .collect()
    }

    /// `(offset, period, pairs)`: `(a, offset + k·period + r)` is in the
    /// set for every `k ≥ 0` exactly when `(a, r)` is listed.
    pub fn periodic(&self) -> (usize, usize, Vec<(usize, usize)>) {
        let pairs = self
            .0
            .cycle()
            .iter()
            .enumerate()
            .flat_map(|(r, l)| crate::guard::bits(l.0).map(move |a| (a, r)))
            .collect();
        (self.0.loop_start(), self.0.cycle().len(), pairs)
    }

    pub fn is_subset(&self, other: &Changes) -> bool {
        let (s, p) = common_shape([&self.0, &other.0]);
        let a = self.0.unroll(s, p);
        let b = other.0.unroll(s, p);
        (0..s + p).all(|i| a.at(i).0 & !b.at(i).0 == 0)
    }
}

/// A concrete word supporting a verdict.
#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub role: String,
    pub word: String,
    #[serde(skip)]
    pub lasso: LassoWord,
}

impl Witness {
    fn new(role: &str, lasso: LassoWord, alphabet: &Alphabet) -> Witness {
        Witness {
            role: role.to_string(),
            word: lasso.display(alphabet),
            lasso,
        }
    }
}

/// Three-valued outcome of a bounded check.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "verdict", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum OracleVerdict {
    Pass { checked: usize },
    Fail { reason: String, witnesses: Vec<Witness> },
    Inconclusive { reason: String },
}

impl OracleVerdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, OracleVerdict::Pass { .. })
    }

    pub fn is_fail(&self) -> bool {
        matches!(self, OracleVerdict::Fail { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            OracleVerdict::Pass { .. } => "PASS",
            OracleVerdict::Fail { .. } => "FAIL",
            OracleVerdict::Inconclusive { .. } => "INCONCLUSIVE",
        }
    }
}

impl fmt::Display for OracleVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleVerdict::Pass { checked } => write!(f, "PASS ({checked} words checked)"),
            OracleVerdict::Fail { reason, witnesses } => {
                write!(f, "FAIL: {reason}")?;
                for w in witnesses {
                    write!(f, "; {} = {}", w.role, w.word)?;
                }
                Ok(())
            }
            OracleVerdict::Inconclusive { reason } => write!(f, "INCONCLUSIVE: {reason}"),
        }
    }
}

/// Results of all three checks for one cause.
#[derive(Clone, Debug, Serialize)]
pub struct OracleReport {
    pub sat: OracleVerdict,
    pub cf: OracleVerdict,
    pub downward_closed: OracleVerdict,
}

impl OracleReport {
    pub fn verdicts(&self) -> [(&'static str, &OracleVerdict); 3] {
        [
            ("sat", &self.sat),
            ("cf", &self.cf),
            ("downward_closed", &self.downward_closed),
        ]
    }

    pub fn any_fail(&self) -> bool {
        self.verdicts().iter().any(|(_, v)| v.is_fail())
    }

    pub fn all_pass(&self) -> bool {
        self.verdicts().iter().all(|(_, v)| v.is_pass())
    }
}

/// Whether some completion of an input word violates the effect.
#[derive(Clone, Debug)]
enum Violation {
    Yes(Witness),
    No,
    Unknown,
}

struct Checker<'a> {
    system: &'a System,
    effect: &'a Property,
    input_mask: u64,
    pi_inputs: LassoWord,
    cause: Nba,
    /// Counterfactual automaton and its traces violating the effect.
    contingency: Option<(System, Nba)>,
    cache: HashMap<LassoWord, Violation>,
}

impl<'a> Checker<'a> {
    fn new(system: &'a System, pi: &LassoWord, cause: &Nba, effect: &'a Property, contingencies: bool) -> Result<Self> {
        if !system.validate_trace(pi)? {
            return Err(Error::InvalidTrace(pi.display(system.alphabet())));
        }
        let input_ab = Alphabet::new(system.inputs().iter().cloned())?;
        for s in cause.alphabet().symbols() {
            if !input_ab.contains(s) {
                return Err(Error::AlphabetMismatch(format!(
                    "cause symbol `{s}` is not a system input (expected one of {input_ab})"
                )));
            }
        }
        let cause = if cause.alphabet() == &input_ab {
            cause.clone()
        } else {
            remap_alphabet(cause, &input_ab, |s| SymbolMap::Rename(s.to_string()))?
        };
        let contingency = if contingencies {
            let c = system.counterfactual_automaton(pi)?;
            let neg = effect.negated_nba(c.alphabet(), Budget::unlimited())?;
            let bad = intersect(&c.trace_language(), &neg)?;
            Some((c, bad))
        } else {
            None
        };
        Ok(Checker {
            system,
            effect,
            input_mask: system.input_mask(),
            pi_inputs: pi.project(system.input_mask()),
            cause,
            contingency,
            cache: HashMap::new(),
        })
    }

    fn alphabet(&self) -> &Alphabet {
        self.system.alphabet()
    }

    fn in_cause(&self, w: &LassoWord) -> bool {
        self.cause.accepts_lasso(w)
    }

    fn violation(&mut self, rho: &LassoWord) -> Result<Violation> {
        let key = rho.canonical();
        if let Some(v) = self.cache.get(&key) {
            return Ok(v.clone());
        }
        let v = match &self.contingency {
            None => {
                let completions = self.system.complete_trace(rho, COMPLETION_LIMIT);
                let mut found = None;
                for sigma in &completions.traces {
                    if !self.effect.holds_on(self.alphabet(), sigma)? {
                        found = Some(Witness::new("completion", sigma.clone(), self.alphabet()));
                        break;
                    }
                }
                match found {
                    Some(w) => Violation::Yes(w),
                    None if completions.exhaustive => Violation::No,
                    None => Violation::Unknown,
                }
            }
            Some((c, bad)) => {
                let mut pinned = Nba::new(c.alphabet().clone());
                let n = rho.len();
                for _ in 0..n {
                    pinned.add_state(true);
                }
                pinned.add_initial(0);
                for i in 0..n {
                    let cube = Cube::exact(Letter(rho.letter(i).0 & self.input_mask), self.input_mask);
                    pinned.add_edge(i, Guard::cube(cube), rho.succ(i));
                }
                match intersect(bad, &pinned)?.emptiness() {
                    Emptiness::Empty => Violation::No,
                    Emptiness::NonEmpty(w) => {
                        Violation::Yes(Witness::new("counterfactual completion", w, c.alphabet()))
                    }
                }
            }
        };
        self.cache.insert(key, v.clone());
        Ok(v)
    }

    /// Every input word `sigma` with `changes(pi, sigma) ⊆ changes(pi, far)`,
    /// when that set is finite and small enough.
    fn exact_candidates(&self, far: &LassoWord) -> Option<Vec<LassoWord>> {
        let d = changes(&self.pi_inputs, far);
        if !d.is_finite() {
            return None;
        }
        let stem = d.masks().stem();
        let total: u32 = stem.iter().map(|l| l.0.count_ones()).sum();
        if total as usize > CANDIDATE_LIMIT.trailing_zeros() as usize {
            return None;
        }
        let base_stem = stem.len().max(self.pi_inputs.stem().len());
        let base = self.pi_inputs.unroll(base_stem, self.pi_inputs.cycle().len());
        let mut out = vec![base.clone()];
        for (i, m) in stem.iter().enumerate() {
            let mut next = Vec::new();
            for w in &out {
                for sub in submasks(m.0) {
                    let mut st = w.stem().to_vec();
                    st[i] = Letter(st[i].0 ^ sub);
                    next.push(LassoWord::new(st, w.cycle().to_vec()).expect("nonempty loop"));
                }
            }
            out = next;
        }
        Some(out)
    }

    fn relates(&self, rel: &SimilarityRelation, close: &LassoWord, far: &LassoWord) -> Result<bool> {
        rel.relates(self.alphabet(), &self.pi_inputs, close, far)
    }
}

fn input_universe_check(system: &System, u: &BoundedUniverse) -> Result<()> {
    if u.alphabet().symbols() != system.inputs() {
        return Err(Error::AlphabetMismatch(format!(
            "the bounded universe ranges over {} but the system inputs are {{{}}}",
            u.alphabet(),
            system.inputs().join(",")
        )));
    }
    Ok(())
}

fn check_relation(system: &System, rel: &SimilarityRelation) -> Result<()> {
    if rel.inputs() != system.inputs() {
        return Err(Error::AlphabetMismatch(format!(
            "relation `{}` ranges over inputs {{{}}} but the system inputs are {{{}}}",
            rel.name,
            rel.inputs().join(","),
            system.inputs().join(",")
        )));
    }
    Ok(())
}

/// SAT: the inputs of `pi` are in the cause and every system trace with
/// those inputs satisfies the effect.
pub fn check_sat(system: &System, pi: &LassoWord, cause: &Nba, effect: &Property) -> Result<OracleVerdict> {
    let mut ck = Checker::new(system, pi, cause, effect, false)?;
    let ab = system.alphabet().clone();
    let rho = ck.pi_inputs.clone();
    if !ck.in_cause(&rho) {
        return Ok(OracleVerdict::Fail {
            reason: "the inputs of the trace are not in the cause".into(),
            witnesses: vec![Witness::new("trace inputs", rho, &ab)],
        });
    }
    let completions = system.complete_trace(&rho, COMPLETION_LIMIT);
    for sigma in &completions.traces {
        if !ck.effect.holds_on(&ab, sigma)? {
            return Ok(OracleVerdict::Fail {
                reason: "an input-equivalent system trace violates the effect".into(),
                witnesses: vec![Witness::new("completion", sigma.clone(), &ab)],
            });
        }
    }
    ck.cache.clear();
    if !completions.exhaustive {
        return Ok(OracleVerdict::Inconclusive {
            reason: format!("more than {COMPLETION_LIMIT} input-equivalent traces"),
        });
    }
    Ok(OracleVerdict::Pass {
        checked: completions.traces.len(),
    })
}

/// CF: every bounded input word `pi0` outside the cause has an
/// at-least-as-close word `pi1` outside the cause with a completion that
/// violates the effect.
pub fn check_cf(
    system: &System,
    pi: &LassoWord,
    cause: &Nba,
    effect: &Property,
    rel: &SimilarityRelation,
    u: &BoundedUniverse,
    contingencies: bool,
) -> Result<OracleVerdict> {
    input_universe_check(system, u)?;
    check_relation(system, rel)?;
    let mut ck = Checker::new(system, pi, cause, effect, contingencies)?;
    let ab = system.alphabet().clone();
    let members = u.members();
    // Bounded words outside the cause whose completions violate the effect.
    let mut bad: Vec<(LassoWord, Changes)> = Vec::new();
    for w in &members {
        if !ck.in_cause(w) {
            if let Violation::Yes(_) = ck.violation(w)? {
                bad.push((w.clone(), changes(&ck.pi_inputs, w)));
            }
        }
    }
    let mut checked = 0;
    let mut open = Vec::new();
    'far: for pi0 in &members {
        if ck.in_cause(pi0) {
            continue;
        }
        checked += 1;
        if matches!(ck.violation(pi0)?, Violation::Yes(_)) && ck.relates(rel, pi0, pi0)? {
            continue;
        }
        let far = changes(&ck.pi_inputs, pi0);
        for (pi1, c1) in &bad {
            if (!rel.refines_subset || c1.is_subset(&far)) && ck.relates(rel, pi1, pi0)? {
                continue 'far;
            }
        }
        let exact = if rel.refines_subset {
            ck.exact_candidates(pi0)
        } else {
            None
        };
        let Some(candidates) = exact else {
            open.push(pi0.clone());
            continue;
        };
        let mut unknown = false;
        for pi1 in &candidates {
            if ck.in_cause(pi1) || !ck.relates(rel, pi1, pi0)? {
                continue;
            }
            match ck.violation(pi1)? {
                Violation::Yes(_) => continue 'far,
                Violation::Unknown => unknown = true,
                Violation::No => {}
            }
        }
        if unknown {
            open.push(pi0.clone());
            continue;
        }
        return Ok(OracleVerdict::Fail {
            reason: format!(
                "no trace at least as close as this one avoids the cause and violates the effect ({} candidates searched)",
                candidates.len()
            ),
            witnesses: vec![Witness::new("farther trace", pi0.clone(), &ab)],
        });
    }
    if let Some(first) = open.first() {
        return Ok(OracleVerdict::Inconclusive {
            reason: format!(
                "{} of {checked} words outside the cause have no bounded witness, e.g. {}",
                open.len(),
                first.display(&ab)
            ),
        });
    }
    Ok(OracleVerdict::Pass { checked })
}

/// Downward closure: for every bounded `rho` in the cause, every system
/// trace whose inputs are at least as close as `rho` satisfies the effect.
pub fn check_downward_closed(
    cause: &Nba,
    effect: &Property,
    system: &System,
    pi: &LassoWord,
    rel: &SimilarityRelation,
    u: &BoundedUniverse,
    contingencies: bool,
) -> Result<OracleVerdict> {
    input_universe_check(system, u)?;
    check_relation(system, rel)?;
    let mut ck = Checker::new(system, pi, cause, effect, contingencies)?;
    let ab = system.alphabet().clone();
    let members = u.members();
    let mut bad: Vec<(LassoWord, Changes, Witness)> = Vec::new();
    for w in &members {
        if let Violation::Yes(sigma) = ck.violation(w)? {
            bad.push((w.clone(), changes(&ck.pi_inputs, w), sigma));
        }
    }
    let fail = |rho: &LassoWord, sigma: Witness| OracleVerdict::Fail {
        reason: "a trace at least as close as a word of the cause violates the effect".into(),
        witnesses: vec![Witness::new("cause word", rho.clone(), &ab), sigma],
    };
    let mut checked = 0;
    for rho in &members {
        if !ck.in_cause(rho) {
            continue;
        }
        checked += 1;
        let far = changes(&ck.pi_inputs, rho);
        for (sigma_in, c, sigma) in &bad {
            if (!rel.refines_subset || c.is_subset(&far)) && ck.relates(rel, sigma_in, rho)? {
                return Ok(fail(rho, sigma.clone()));
            }
        }
        if rel.refines_subset {
            for sigma_in in ck.exact_candidates(rho).unwrap_or_default() {
                if !ck.relates(rel, &sigma_in, rho)? {
                    continue;
                }
                if let Violation::Yes(sigma) = ck.violation(&sigma_in)? {
                    return Ok(fail(rho, sigma));
                }
            }
        }
    }
    Ok(OracleVerdict::Pass { checked })
}

/// Runs all three checks.
pub fn verify_cause(
    system: &System,
    pi: &LassoWord,
    cause: &Nba,
    effect: &Property,
    rel: &SimilarityRelation,
    u: &BoundedUniverse,
    contingencies: bool,
) -> Result<OracleReport> {
    Ok(OracleReport {
        sat: check_sat(system, pi, cause, effect)?,
        cf: check_cf(system, pi, cause, effect, rel, u, contingencies)?,
        downward_closed: check_downward_closed(cause, effect, system, pi, rel, u, contingencies)?,
    })
}

/// The universe of input lassos of `system` at the given bounds.
pub fn input_universe(system: &System, stem_bound: usize, loop_bound: usize) -> Result<BoundedUniverse> {
    BoundedUniverse::new(Alphabet::new(system.inputs().iter().cloned())?, stem_bound, loop_bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltl::{parse_ltl, ApUniverse};

    fn ab(names: &[&str]) -> Alphabet {
        Alphabet::new(names.iter().copied()).unwrap()
    }

    fn example() -> System {
        crate::system::tests::example()
    }

    #[test]
    fn enumeration_counts() {
        let a = ab(&["a"]);
        let u = BoundedUniverse::new(a.clone(), 0, 1).unwrap();
        let all: Vec<_> = enumerate_lassos(&u).map(|w| w.display(&a)).collect();
        assert_eq!(all, ["({})^w", "({a})^w"]);
        assert_eq!(BoundedUniverse::new(a.clone(), 1, 1).unwrap().count(), 6);
        assert_eq!(enumerate_lassos(&BoundedUniverse::new(a, 1, 1).unwrap()).count(), 6);
        assert!(BoundedUniverse::new(ab(&["a"]), 1, 0).is_err());
    }

    #[test]
    fn enumeration_is_duplicate_free() {
        let u = BoundedUniverse::new(ab(&["a", "b"]), 2, 2).unwrap();
        let all: Vec<_> = enumerate_lassos(&u).collect();
        let distinct: HashSet<_> = all.iter().cloned().collect();
        assert_eq!(all.len(), distinct.len());
        assert_eq!(all.len() as u128, u.count());
    }

    #[test]
    fn sampling_is_deterministic_and_capped() {
        let u = BoundedUniverse::new(ab(&["a", "b", "c"]), 3, 2)
            .unwrap()
            .with_sample_cap(100, 7);
        assert!(!u.is_exhaustive());
        let first = u.members();
        assert_eq!(first.len(), 100);
        assert_eq!(first, u.members());
        let small = BoundedUniverse::new(ab(&["a"]), 1, 1).unwrap().with_sample_cap(100, 7);
        assert!(small.is_exhaustive());
        assert_eq!(small.members().len(), 6);
    }

    #[test]
    fn changes_of_example_traces() {
        let a = ab(&["x", "y"]);
        let p = |s: &str| LassoWord::parse(s, &a).unwrap();
        let c = changes(&p("{x};({})^w"), &p("{};({})^w"));
        assert_eq!(c.transient(), vec![(0, 0)]);
        assert!(c.is_finite());
        assert!(changes(&p("({x})^w"), &p("({x})^w")).is_empty());
        let c = changes(&p("({x})^w"), &p("({x};{y,x})^w"));
        let (offset, period, pairs) = c.periodic();
        assert_eq!((offset, period, pairs), (0, 2, vec![(1, 1)]));
        assert!(c.contains(1, 3) && !c.contains(1, 4));
    }

    #[test]
    fn example_candidates() {
        let t = example();
        let ab = t.alphabet().clone();
        let pi = LassoWord::parse("({x,e})^w", &ab).unwrap();
        let inputs = Alphabet::new(["x", "y"]).unwrap();
        let cause = |f: &str| ltl_to(parse_ltl(f, ApUniverse::Open).unwrap(), &inputs);
        let effect = Property::Formula(parse_ltl("F e", ApUniverse::Open).unwrap());
        let rel = crate::similarity::subset_relation(t.inputs()).unwrap();
        let u = input_universe(&t, 2, 2).unwrap();

        assert!(check_sat(&t, &pi, &cause("F x"), &effect).unwrap().is_pass());
        assert!(check_cf(&t, &pi, &cause("F x"), &effect, &rel, &u, false)
            .unwrap()
            .is_pass());
        let v = check_cf(&t, &pi, &cause("G x"), &effect, &rel, &u, false).unwrap();
        assert!(v.is_fail(), "{v}");
        let v = check_cf(&t, &pi, &cause("true"), &effect, &rel, &u, false).unwrap();
        assert!(v.is_pass(), "{v}");
        assert!(check_sat(&t, &pi, &cause("!x"), &effect).unwrap().is_fail());

        assert!(check_downward_closed(&cause("F x"), &effect, &t, &pi, &rel, &u, false)
            .unwrap()
            .is_pass());
        let v = check_downward_closed(&cause("true"), &effect, &t, &pi, &rel, &u, false).unwrap();
        assert!(v.is_fail(), "{v}");
        assert!(
            check_downward_closed(&cause("false"), &effect, &t, &pi, &rel, &u, false)
                .unwrap()
                .is_pass()
        );
    }

    fn ltl_to(f: crate::ltl::Ltl, ab: &Alphabet) -> Nba {
        crate::ltl::ltl_to_nba(&f, ab).unwrap()
    }
}
