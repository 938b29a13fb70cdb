//! Similarity relations over triples of input sequences.
//!
//! A relation is an NBA over the *zipped* alphabet whose symbols are
//! `i@t0`, `i@t1`, `i@t2` for every input `i`: `t0` is the actual trace,
//! `t1` the closer and `t2` the farther trace. The symbol order is fixed:
//! all `t0` symbols, then all `t1`, then all `t2`, each block in declared
//! input order. After [`lift_relation`] the outputs join the `t0` and `t1`
//! blocks (inputs first, then outputs).

use std::fmt;

use crate::alphabet::{Alphabet, Letter};
use crate::automata::{is_subset, remap_alphabet, Nba, SymbolMap};
use crate::error::{Error, Result};
use crate::guard::{Cube, Guard};
use crate::lasso::{common_shape, LassoWord};
use crate::ltl::{ltl_to_nba, Ltl};

/// Trace variable of a zipped symbol.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Tag {
    /// The actual trace.
    T0,
    /// The closer trace.
    T1,
    /// The farther trace.
    T2,
}

impl Tag {
    pub const ALL: [Tag; 3] = [Tag::T0, Tag::T1, Tag::T2];

    pub fn suffix(self) -> &'static str {
        match self {
            Tag::T0 => "t0",
            Tag::T1 => "t1",
            Tag::T2 => "t2",
        }
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.suffix())
    }
}

/// The zipped name of `symbol` under `tag`, e.g. `x@t1`.
pub fn tagged(symbol: &str, tag: Tag) -> String {
    format!("{symbol}@{tag}")
}

/// Splits `x@t1` into `("x", T1)`.
pub fn untag(name: &str) -> Option<(&str, Tag)> {
    let (base, tag) = name.rsplit_once('@')?;
    let tag = match tag {
        "t0" => Tag::T0,
        "t1" => Tag::T1,
        "t2" => Tag::T2,
        _ => return None,
    };
    (!base.is_empty()).then_some((base, tag))
}

/// `2^(I × {t0,t1,t2})`.
pub fn relation_alphabet<S: AsRef<str>>(inputs: &[S]) -> Result<Alphabet> {
    Alphabet::new(
        Tag::ALL
            .iter()
            .flat_map(|&t| inputs.iter().map(move |i| tagged(i.as_ref(), t))),
    )
}

/// `2^((I × {t0,t1,t2}) ∪ (O × {t0,t1}))`.
pub fn zipped_alphabet<S: AsRef<str>>(inputs: &[S], outputs: &[S]) -> Result<Alphabet> {
    let mut names = Vec::new();
    for t in [Tag::T0, Tag::T1] {
        names.extend(inputs.iter().map(|i| tagged(i.as_ref(), t)));
        names.extend(outputs.iter().map(|o| tagged(o.as_ref(), t)));
    }
    names.extend(inputs.iter().map(|i| tagged(i.as_ref(), Tag::T2)));
    Alphabet::new(names)
}

/// A similarity relation carried as an automaton over
/// [`relation_alphabet`].
#[derive(Clone, Debug)]
pub struct SimilarityRelation {
    pub name: String,
    inputs: Vec<String>,
    nba: Nba,
    /// Whether the relation is known to satisfy the limit assumption
    /// (closest counterfactual traces always exist). Informational only.
    pub limit_assumption_known: bool,
    /// Every triple in the relation is also in the subset relation, so a
    /// closer trace only changes inputs the farther one changes.
    pub refines_subset: bool,
}

impl SimilarityRelation {
    pub fn inputs(&self) -> &[String] {
        &self.inputs
    }

    pub fn nba(&self) -> &Nba {
        &self.nba
    }

    /// Wraps an automaton already over `relation_alphabet(inputs)`, or over
    /// any alphabet whose symbols are zipped input names; missing symbols
    /// are unconstrained.
    pub fn custom(name: impl Into<String>, inputs: &[String], nba: &Nba) -> Result<SimilarityRelation> {
        let target = relation_alphabet(inputs)?;
        for s in nba.alphabet().symbols() {
            if !target.contains(s) {
                return Err(Error::AlphabetMismatch(format!(
                    "relation symbol `{s}` is not a zipped input (expected one of {target})"
                )));
            }
        }
        let nba = remap_alphabet(nba, &target, |s| SymbolMap::Rename(s.to_string()))?;
        let refines_subset = is_subset(&nba, subset_relation(inputs)?.nba())?;
        Ok(SimilarityRelation {
            name: name.into(),
            inputs: inputs.to_vec(),
            nba,
            limit_assumption_known: false,
            refines_subset,
        })
    }

    /// `zip(actual, close, far)` is in the relation. Each word may carry
    /// extra symbols (outputs); only the inputs are compared.
    pub fn relates(&self, alphabet: &Alphabet, actual: &LassoWord, close: &LassoWord, far: &LassoWord) -> Result<bool> {
        let z = zip_lassos(
            [(actual, alphabet), (close, alphabet), (far, alphabet)],
            self.nba.alphabet(),
        )?;
        Ok(self.nba.accepts_lasso(&z))
    }
}

fn differs(ab: &Alphabet, i: &str, a: Tag, b: Tag) -> Result<Guard> {
    let x = ab.index_of(&tagged(i, a)).expect("zipped symbol");
    let y = ab.index_of(&tagged(i, b)).expect("zipped symbol");
    Ok(Guard::from_cubes([
        Cube::literal(x, true).and(Cube::literal(y, false)).unwrap(),
        Cube::literal(x, false).and(Cube::literal(y, true)).unwrap(),
    ]))
}

fn check_inputs<S: AsRef<str>>(inputs: &[S]) -> Result<Vec<String>> {
    if inputs.is_empty() {
        return Err(Error::InvalidArgument(
            "a similarity relation needs at least one input".into(),
        ));
    }
    Ok(inputs.iter().map(|s| s.as_ref().to_string()).collect())
}

/// Positionwise: every input that differs between the actual and the
/// closer trace also differs between the actual and the farther trace.
/// A single state with one self-loop.
pub fn subset_relation<S: AsRef<str>>(inputs: &[S]) -> Result<SimilarityRelation> {
    let inputs = check_inputs(inputs)?;
    let ab = relation_alphabet(&inputs)?;
    let mut guard = Guard::verum();
    for i in &inputs {
        let premise = differs(&ab, i, Tag::T0, Tag::T1)?;
        let conclusion = differs(&ab, i, Tag::T0, Tag::T2)?;
        guard = guard.and(&premise.not().or(&conclusion));
    }
    let mut nba = Nba::new(ab);
    let q = nba.add_state(true);
    nba.add_initial(q);
    nba.add_edge(q, guard, q);
    Ok(SimilarityRelation {
        name: "subset".into(),
        inputs,
        nba,
        limit_assumption_known: false,
        refines_subset: true,
    })
}

fn xor(a: Ltl, b: Ltl) -> Ltl {
    a.iff(b).not()
}

fn atom(i: &str, t: Tag) -> Ltl {
    Ltl::atom(tagged(i, t))
}

/// The subset relation strengthened so that an input changed infinitely
/// often on the closer trace forces the farther trace to agree with the
/// closer one on that input.
pub fn full_relation<S: AsRef<str>>(inputs: &[S]) -> Result<SimilarityRelation> {
    let inputs = check_inputs(inputs)?;
    let ab = relation_alphabet(&inputs)?;
    let step = Ltl::all(
        inputs
            .iter()
            .map(|i| xor(atom(i, Tag::T0), atom(i, Tag::T1)).implies(xor(atom(i, Tag::T0), atom(i, Tag::T2)))),
    );
    let limit = Ltl::all(inputs.iter().map(|i| {
        xor(atom(i, Tag::T0), atom(i, Tag::T1))
            .eventually()
            .globally()
            .implies(atom(i, Tag::T1).iff(atom(i, Tag::T2)).globally())
    }));
    let nba = ltl_to_nba(&step.globally().and(limit), &ab)?;
    Ok(SimilarityRelation {
        name: "full".into(),
        inputs,
        nba,
        limit_assumption_known: true,
        refines_subset: true,
    })
}

/// Extends the relation automaton by `o@t0` and `o@t1` for every output,
/// leaving them unconstrained.
pub fn lift_relation<S: AsRef<str>>(rel: &SimilarityRelation, outputs: &[S]) -> Result<Nba> {
    for o in outputs {
        if rel.inputs.iter().any(|i| i == o.as_ref()) {
            return Err(Error::NameCollision(o.as_ref().to_string()));
        }
    }
    let outputs: Vec<String> = outputs.iter().map(|o| o.as_ref().to_string()).collect();
    let target = zipped_alphabet(&rel.inputs, &outputs)?;
    remap_alphabet(&rel.nba, &target, |s| SymbolMap::Rename(s.to_string()))
}

/// Zips three lassos into one over `target`. Each word comes with its own
/// alphabet; symbol `a` of the `k`-th word becomes `a@tk`. Symbols with no
/// counterpart in `target` (outputs of the farther trace, for instance)
/// are dropped.
pub fn zip_lassos(words: [(&LassoWord, &Alphabet); 3], target: &Alphabet) -> Result<LassoWord> {
    let (stem, cycle) = common_shape(words.iter().map(|(w, _)| *w));
    let mut maps: Vec<Vec<(usize, usize)>> = Vec::with_capacity(3);
    for ((_, ab), tag) in words.iter().zip(Tag::ALL) {
        maps.push(
            ab.symbols()
                .iter()
                .enumerate()
                .filter_map(|(i, s)| target.index_of(&tagged(s, tag)).map(|j| (i, j)))
                .collect(),
        );
    }
    let letter_at = |pos: usize| {
        let mut l = Letter::EMPTY;
        for ((w, _), map) in words.iter().zip(&maps) {
            let src = w.at(pos);
            for &(i, j) in map {
                if src.contains(i) {
                    l = l.with(j, true);
                }
            }
        }
        l
    };
    LassoWord::new(
        (0..stem).map(letter_at).collect(),
        (stem..stem + cycle).map(letter_at).collect(),
    )
}

/// Extracts the `tag` component of a zipped lasso as a word over `dest`.
pub fn unzip_lasso(word: &LassoWord, zipped: &Alphabet, tag: Tag, dest: &Alphabet) -> LassoWord {
    let map: Vec<(usize, usize)> = dest
        .symbols()
        .iter()
        .enumerate()
        .filter_map(|(j, s)| zipped.index_of(&tagged(s, tag)).map(|i| (i, j)))
        .collect();
    word.map_letters(|src| {
        let mut l = Letter::EMPTY;
        for &(i, j) in &map {
            if src.contains(i) {
                l = l.with(j, true);
            }
        }
        l
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy() -> Alphabet {
        Alphabet::new(["x", "y"]).unwrap()
    }

    fn w(text: &str) -> LassoWord {
        LassoWord::parse(text, &xy()).unwrap()
    }

    #[test]
    fn alphabet_order() {
        let ab = zipped_alphabet(&["a"], &["o"]).unwrap();
        assert_eq!(ab.symbols(), ["a@t0", "o@t0", "a@t1", "o@t1", "a@t2"]);
        assert_eq!(untag("o@t1"), Some(("o", Tag::T1)));
        assert_eq!(untag("o@t3"), None);
    }

    #[test]
    fn subset_example() {
        let r = subset_relation(&["x", "y"]).unwrap();
        assert_eq!(r.nba().num_states(), 1);
        let pi = w("{x};({})^w");
        let p0 = w("{};({})^w");
        let p1 = w("{};{y};({})^w");
        let p2 = w("{x};({y})^w");
        assert!(r.relates(&xy(), &pi, &p0, &p1).unwrap());
        assert!(!r.relates(&xy(), &pi, &p1, &p0).unwrap());
        assert!(!r.relates(&xy(), &pi, &p2, &p0).unwrap());
        assert!(!r.relates(&xy(), &pi, &p0, &p2).unwrap());
        assert!(r.relates(&xy(), &pi, &pi, &p2).unwrap());
    }

    #[test]
    fn full_is_contained_in_subset() {
        for inputs in [vec!["a"], vec!["a", "b"]] {
            let full = full_relation(&inputs).unwrap();
            let sub = subset_relation(&inputs).unwrap();
            assert!(is_subset(full.nba(), sub.nba()).unwrap());
            assert!(!is_subset(sub.nba(), full.nba()).unwrap());
        }
    }

    #[test]
    fn lifting_keeps_one_state() {
        let r = subset_relation(&["x"]).unwrap();
        let lifted = lift_relation(&r, &["e"]).unwrap();
        assert_eq!(lifted.num_states(), 1);
        assert_eq!(lifted.alphabet().len(), 5);
        assert!(lift_relation(&r, &["x"]).is_err());
    }

    #[test]
    fn zip_shapes_and_roundtrip() {
        let ab = xy();
        let a = w("({x};{y})^w");
        let b = w("({};{};{x})^w");
        let c = w("{y};({})^w");
        let z_ab = relation_alphabet(&["x", "y"]).unwrap();
        let z = zip_lassos([(&a, &ab), (&b, &ab), (&c, &ab)], &z_ab).unwrap();
        assert_eq!(z.loop_start(), 1);
        assert_eq!(z.cycle().len(), 6);
        assert!(unzip_lasso(&z, &z_ab, Tag::T0, &ab).same_word(&a));
        assert!(unzip_lasso(&z, &z_ab, Tag::T1, &ab).same_word(&b));
        assert!(unzip_lasso(&z, &z_ab, Tag::T2, &ab).same_word(&c));
    }

    #[test]
    fn custom_relation_rejects_foreign_symbols() {
        let ab = Alphabet::new(["x@t0", "z"]).unwrap();
        let nba = Nba::universal(ab);
        assert!(SimilarityRelation::custom("c", &["x".to_string()], &nba).is_err());
    }
}
