use std::hint::black_box;
use std::time::Duration;

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};

use corpkit_bench::random_nba;
use corpkit_core::automata::complement;
use corpkit_core::instances::{self, Expected, Instance};
use corpkit_core::ltl::{ltl_to_nba, parse_ltl, ApUniverse};
use corpkit_core::similarity::{full_relation, subset_relation};
use corpkit_core::synthesis::{check_cause, synthesize_cause};
use corpkit_core::{Alphabet, Options, Property, SimilarityRelation};

fn relation(inst: &Instance, full: bool) -> SimilarityRelation {
    if full {
        full_relation(inst.system.inputs()).unwrap()
    } else {
        subset_relation(inst.system.inputs()).unwrap()
    }
}

fn arbiter(name: &str, effect: &str) -> Instance {
    instances::arbiter_instances(4)
        .unwrap()
        .into_iter()
        .find(|r| r.name == name && r.effect_text == effect)
        .unwrap()
}

fn synthesis(c: &mut Criterion) {
    let cases = [
        ("example F e", instances::example("F e").unwrap(), false),
        ("example G F e", instances::example("G F e").unwrap(), false),
        ("faulty", instances::faulty().unwrap(), false),
        ("faulty full", instances::faulty().unwrap(), true),
        ("Spurious 4 full", arbiter("Spurious 4", "F g_0"), true),
        ("Unfair 4 full", arbiter("Unfair 4", "G !g_0"), true),
        ("Full 3 GF", arbiter("Full 3", "G F g_0"), false),
        ("Full 4 GF", arbiter("Full 4", "G F g_0"), false),
    ];
    let mut g = c.benchmark_group("synthesize");
    g.sample_size(10).measurement_time(Duration::from_secs(5));
    for (label, inst, full) in &cases {
        let rel = relation(inst, *full);
        g.bench_function(*label, |b| {
            b.iter(|| {
                synthesize_cause(&inst.system, &inst.trace, &inst.effect, &rel, Options::default())
                    .unwrap()
                    .cause()
                    .map(|c| c.num_states())
            })
        });
    }
    g.finish();
}

fn checking(c: &mut Criterion) {
    let inst = instances::faulty().unwrap();
    let rel = relation(&inst, false);
    let Expected::Cause(f) = &inst.expected else {
        unreachable!()
    };
    let candidate = Property::Formula(f.clone());
    c.bench_function("check faulty expected", |b| {
        b.iter(|| {
            check_cause(
                &inst.system,
                &inst.trace,
                &inst.effect,
                &rel,
                &candidate,
                Options::default(),
            )
            .unwrap()
        })
    });
}

fn complementation(c: &mut Criterion) {
    let mut g = c.benchmark_group("complement");
    for states in [4, 5, 6] {
        let inputs: Vec<_> = (0..16).map(|seed| random_nba(seed, states, 2, 0.3)).collect();
        g.bench_function(format!("16 random, {states} states"), |b| {
            b.iter_batched(
                || inputs.clone(),
                |autos| autos.iter().map(|a| complement(a).unwrap().num_states()).sum::<usize>(),
                BatchSize::SmallInput,
            )
        });
    }
    g.finish();
}

fn translation(c: &mut Criterion) {
    let ab = Alphabet::new(["a", "b", "c"]).unwrap();
    let f = parse_ltl(
        "!((a U b) <-> G F c) & G (a -> X (b R c))",
        ApUniverse::Closed(ab.symbols()),
    )
    .unwrap();
    c.bench_function("translate", |b| {
        b.iter(|| ltl_to_nba(black_box(&f), &ab).unwrap().num_states())
    });
}

criterion_group!(benches, synthesis, checking, complementation, translation);
criterion_main!(benches);
