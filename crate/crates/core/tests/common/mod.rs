//! Shared strategies and helpers for the integration suites.
#![allow(dead_code)]

use corpkit_core::automata::Nba;
use corpkit_core::ltl::Ltl;
use corpkit_core::oracle::{enumerate_lassos, BoundedUniverse};
use corpkit_core::{Alphabet, Cube, Guard, LassoWord};
use proptest::prelude::*;

pub fn alphabet(n: usize) -> Alphabet {
    Alphabet::new(["a", "b", "c", "d"].iter().take(n).copied()).unwrap()
}

/// Every lasso over `ab` with stem ≤ `stem` and loop ≤ `lp`.
pub fn all_lassos(ab: &Alphabet, stem: usize, lp: usize) -> Vec<LassoWord> {
    let u = BoundedUniverse::new(ab.clone(), stem, lp).unwrap();
    enumerate_lassos(&u).collect()
}

/// A cube given as one of {absent, positive, negative} per variable.
fn cube_from(codes: &[u8]) -> Cube {
    codes.iter().enumerate().fold(Cube::TOP, |c, (v, &code)| match code {
        1 => c.and(Cube::literal(v, true)).unwrap(),
        2 => c.and(Cube::literal(v, false)).unwrap(),
        _ => c,
    })
}

pub fn arb_guard(aps: usize) -> impl Strategy<Value = Guard> {
    prop::collection::vec(prop::collection::vec(0u8..3, aps), 1..=2)
        .prop_map(|cubes| Guard::from_cubes(cubes.iter().map(|c| cube_from(c))))
}

/// Random NBAs with 1 to `max_states` states over `aps` propositions.
pub fn arb_nba(max_states: usize, aps: usize) -> impl Strategy<Value = Nba> {
    (1..=max_states).prop_flat_map(move |n| {
        (
            prop::collection::vec(any::<bool>(), n),
            0..n,
            prop::collection::vec(prop::option::weighted(0.45, arb_guard(aps)), n * n),
        )
            .prop_map(move |(acc, init, edges)| {
                let mut a = Nba::new(alphabet(aps));
                for &f in &acc {
                    a.add_state(f);
                }
                a.add_initial(init);
                for (k, g) in edges.into_iter().enumerate() {
                    if let Some(g) = g {
                        a.add_edge(k / n, g, k % n);
                    }
                }
                a
            })
    })
}

/// Random semi-deterministic NBAs: `nd` free states followed by `det`
/// states whose rows pick at most one target per letter. Only the latter
/// may accept.
pub fn arb_semideterministic(nd: usize, det: usize, aps: usize) -> impl Strategy<Value = Nba> {
    let letters = 1usize << aps;
    (
        prop::collection::vec(any::<bool>(), det),
        prop::collection::vec(prop::option::weighted(0.4, arb_guard(aps)), nd * (nd + det)),
        prop::collection::vec(prop::option::weighted(0.8, 0..det), det * letters),
    )
        .prop_map(move |(acc, free, rows)| {
            let mut a = Nba::new(alphabet(aps));
            for _ in 0..nd {
                a.add_state(false);
            }
            for &f in &acc {
                a.add_state(f);
            }
            a.add_initial(0);
            for (k, g) in free.into_iter().enumerate() {
                if let Some(g) = g {
                    a.add_edge(k / (nd + det), g, k % (nd + det));
                }
            }
            for (k, t) in rows.into_iter().enumerate() {
                if let Some(t) = t {
                    let letter = (k % letters) as u64;
                    let cube = (0..aps).fold(Cube::TOP, |c, v| c.and(Cube::literal(v, letter >> v & 1 == 1)).unwrap());
                    a.add_edge(nd + k / letters, Guard::from_cubes([cube]), nd + t);
                }
            }
            a
        })
}

pub fn arb_ltl(depth: u32, aps: usize) -> impl Strategy<Value = Ltl> {
    let names: Vec<String> = alphabet(aps).symbols().to_vec();
    let leaf = prop_oneof![
        1 => Just(Ltl::True),
        1 => Just(Ltl::False),
        4 => prop::sample::select(names).prop_map(Ltl::atom),
    ];
    leaf.prop_recursive(depth, 32, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Ltl::not),
            inner.clone().prop_map(Ltl::next),
            inner.clone().prop_map(Ltl::eventually),
            inner.clone().prop_map(Ltl::globally),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.and(b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.or(b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.until(b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.release(b)),
            (inner.clone(), inner).prop_map(|(a, b)| a.iff(b)),
        ]
    })
}
