//! Acceptance gates. Prints one PASS/FAIL line per criterion followed by
//! indented details, and exits non-zero when any gate fails.
//!
//! Instances run one after another: the heavier full-relation rows need
//! up to a few gigabytes each.

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use corpkit_core::automata::{complement, is_equivalent, is_subset};
use corpkit_core::instances::{self, Expected, Instance};
use corpkit_core::ltl::{eval_on_lasso, ltl_to_nba, parse_ltl, ApUniverse, Ltl};
use corpkit_core::oracle::{enumerate_lassos, input_universe, verify_cause, BoundedUniverse, OracleReport};
use corpkit_core::similarity::{full_relation, subset_relation};
use corpkit_core::synthesis::{check_cause, synthesize_cause, CheckVerdict, Direction};
use corpkit_core::{Alphabet, Budget, Cube, Error, Guard, Nba, Options, Property, SimilarityRelation};

const ORACLE_SAMPLE_CAP: usize = 2000;

struct Gate {
    ok: bool,
    details: Vec<String>,
}

impl Gate {
    fn new() -> Gate {
        Gate {
            ok: true,
            details: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, line: String) {
        self.ok &= ok;
        self.details
            .push(format!("{} {line}", if ok { "ok  " } else { "BAD " }));
    }

    fn note(&mut self, line: String) {
        self.details.push(format!("     {line}"));
    }
}

/// Outcome of one synthesis run.
struct Run {
    inst: Instance,
    relation: &'static str,
    contingencies: bool,
    seconds: f64,
    result: Result<Option<Nba>, Error>,
}

impl Run {
    fn cause(&self) -> Option<&Nba> {
        self.result.as_ref().ok().and_then(|c| c.as_ref())
    }

    fn completed(&self) -> bool {
        self.result.is_ok()
    }

    fn label(&self) -> String {
        format!("{} [{}] under {}", self.inst.name, self.inst.effect_text, self.relation)
    }

    fn status(&self) -> String {
        match &self.result {
            Ok(Some(c)) => format!("{:.2}s, {} states", self.seconds, c.num_states()),
            Ok(None) => format!("{:.2}s, no cause", self.seconds),
            Err(e) => format!("{:.2}s, {e}", self.seconds),
        }
    }

    fn matches_expected(&self) -> bool {
        match (&self.inst.expected, self.cause()) {
            (Expected::Cause(f), Some(c)) => {
                let e = ltl_to_nba(f, c.alphabet()).unwrap();
                is_equivalent(c, &e).unwrap()
            }
            _ => false,
        }
    }
}

fn relation(inst: &Instance, name: &str) -> SimilarityRelation {
    match name {
        "subset" => subset_relation(inst.system.inputs()).unwrap(),
        _ => full_relation(inst.system.inputs()).unwrap(),
    }
}

fn run(inst: &Instance, rel: &'static str, contingencies: bool, timeout: Duration) -> Run {
    let opts = Options {
        contingencies,
        budget: Budget::with_timeout(timeout),
    };
    let start = Instant::now();
    let result = synthesize_cause(&inst.system, &inst.trace, &inst.effect, &relation(inst, rel), opts)
        .map(|r| r.cause().cloned());
    Run {
        inst: inst.clone(),
        relation: rel,
        contingencies,
        seconds: start.elapsed().as_secs_f64(),
        result,
    }
}

fn oracle(r: &Run) -> Option<OracleReport> {
    let cause = r.cause()?;
    let u = input_universe(&r.inst.system, 3, 2)
        .unwrap()
        .with_sample_cap(ORACLE_SAMPLE_CAP, 0);
    let rel = relation(&r.inst, r.relation);
    Some(
        verify_cause(
            &r.inst.system,
            &r.inst.trace,
            cause,
            &r.inst.effect,
            &rel,
            &u,
            r.contingencies,
        )
        .unwrap(),
    )
}

fn oracle_summary(rep: &OracleReport) -> String {
    rep.verdicts()
        .iter()
        .map(|(n, v)| format!("{n} {}", v.label()))
        .collect::<Vec<_>>()
        .join(", ")
}

fn exact_run_gate(gate: &mut Gate, r: &Run, limit: f64) {
    let ok = r.matches_expected() && r.seconds < limit;
    gate.check(ok, format!("{}: {} (limit {limit}s)", r.label(), r.status()));
}

fn random_guard(rng: &mut ChaCha8Rng, aps: usize) -> Guard {
    let cubes = (0..rng.gen_range(1..=2)).map(|_| {
        (0..aps).fold(Cube::TOP, |c, v| match rng.gen_range(0..3) {
            1 => c.and(Cube::literal(v, true)).unwrap(),
            2 => c.and(Cube::literal(v, false)).unwrap(),
            _ => c,
        })
    });
    Guard::from_cubes(cubes.collect::<Vec<_>>())
}

fn random_nba(rng: &mut ChaCha8Rng) -> Nba {
    let aps = rng.gen_range(1..=2);
    let n = rng.gen_range(1..=4);
    let mut a = Nba::new(Alphabet::new(["a", "b"].into_iter().take(aps)).unwrap());
    for _ in 0..n {
        a.add_state(rng.gen_bool(0.5));
    }
    a.add_initial(rng.gen_range(0..n));
    for p in 0..n {
        for q in 0..n {
            if rng.gen_bool(0.45) {
                let g = random_guard(rng, aps);
                a.add_edge(p, g, q);
            }
        }
    }
    a
}

fn random_ltl(rng: &mut ChaCha8Rng, depth: u32) -> Ltl {
    if depth == 0 || rng.gen_bool(0.25) {
        return match rng.gen_range(0..6) {
            0 => Ltl::True,
            1 => Ltl::False,
            2 | 3 => Ltl::atom("a"),
            _ => Ltl::atom("b"),
        };
    }
    let op = rng.gen_range(0..9);
    let a = random_ltl(rng, depth - 1);
    if op < 4 {
        return match op {
            0 => a.not(),
            1 => a.next(),
            2 => a.eventually(),
            _ => a.globally(),
        };
    }
    let b = random_ltl(rng, depth - 1);
    match op {
        4 => a.and(b),
        5 => a.or(b),
        6 => a.until(b),
        7 => a.release(b),
        _ => a.iff(b),
    }
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn main() {
    let started = Instant::now();
    let mut gates: Vec<(&str, Gate)> = Vec::new();

    // 1. The four-state example.
    let mut g = Gate::new();
    let mut golden: Vec<Run> = Vec::new();
    for effect in ["F e", "G F e"] {
        let r = run(
            &instances::example(effect).unwrap(),
            "subset",
            false,
            Duration::from_secs(60),
        );
        exact_run_gate(&mut g, &r, 10.0);
        golden.push(r);
    }
    gates.push(("1 four-state example causes F x and G F x", g));

    // 2. The faulty two-state system.
    let mut g = Gate::new();
    let r = run(&instances::faulty().unwrap(), "subset", false, Duration::from_secs(60));
    exact_run_gate(&mut g, &r, 30.0);
    golden.push(r);
    gates.push(("2 faulty system cause !i0 & X(!i0 & !i2 & X i0)", g));

    // 3 and 4. Arbiter table under both relations.
    let rows = instances::arbiter_instances(4).unwrap();
    let mut subset_runs = Vec::new();
    let mut full_runs = Vec::new();
    for inst in &rows {
        subset_runs.push(run(inst, "subset", false, Duration::from_secs(120)));
        full_runs.push(run(inst, "full", false, Duration::from_secs(60)));
    }
    let mut g = Gate::new();
    for r in &subset_runs {
        // Four-client full arbiters are outside the gated rows.
        if r.inst.name == "Full 4" {
            g.note(format!(
                "{}: {} (not gating; matches expected: {})",
                r.label(),
                r.status(),
                r.matches_expected()
            ));
        } else {
            exact_run_gate(&mut g, r, 120.0);
            golden.push(run_clone(r));
        }
    }
    gates.push(("3 arbiter cause languages under the subset relation", g));

    let mut g = Gate::new();
    for (s, f) in subset_runs.iter().zip(&full_runs) {
        let s_done = s.completed() && s.seconds < 60.0;
        let f_done = f.completed() && f.seconds < 60.0;
        let ok = !f_done || s_done;
        let agree = match (s.cause(), f.cause()) {
            (Some(a), Some(b)) if f_done => is_equivalent(a, b).unwrap().to_string(),
            _ => "-".into(),
        };
        g.check(
            ok,
            format!(
                "{} [{}]: subset {}; full {}; same language {agree}",
                s.inst.name,
                s.inst.effect_text,
                s.status(),
                f.status()
            ),
        );
    }
    gates.push((
        "4 instances completed with the full relation are completed with subset (60s)",
        g,
    ));

    // 5. Candidate checking.
    let mut g = Gate::new();
    let ex = instances::example("F e").unwrap();
    let ex_rel = relation(&ex, "subset");
    for (cand, want) in [
        ("F x", None),
        ("G x", Some(Direction::TooSmall)),
        ("y | F x", Some(Direction::TooLarge)),
    ] {
        let c = Property::Formula(parse_ltl(cand, ApUniverse::Closed(ex.system.inputs())).unwrap());
        let r = check_cause(&ex.system, &ex.trace, &ex.effect, &ex_rel, &c, Options::default()).unwrap();
        let ok = match (&r.verdict, want) {
            (CheckVerdict::IsCause, None) => true,
            (CheckVerdict::NotCause { direction, .. }, Some(d)) => *direction == d,
            _ => false,
        };
        let shown = match &r.verdict {
            CheckVerdict::NotCause { direction, witness } => {
                let inputs = Alphabet::new(ex.system.inputs().iter().cloned()).unwrap();
                format!("{direction:?}, witness {}", witness.display(&inputs))
            }
            v => format!("{v:?}"),
        };
        g.check(ok, format!("candidate {cand}: {shown}"));
    }
    for r in &golden {
        let cause = r.cause().cloned().unwrap_or_else(|| Nba::empty(Alphabet::empty()));
        let opts = Options {
            contingencies: false,
            budget: Budget::with_timeout(Duration::from_secs(120)),
        };
        let v = check_cause(
            &r.inst.system,
            &r.inst.trace,
            &r.inst.effect,
            &relation(&r.inst, "subset"),
            &Property::Automaton(cause),
            opts,
        )
        .map(|c| c.verdict);
        g.check(
            matches!(v, Ok(CheckVerdict::IsCause)),
            format!(
                "{} [{}] against itself: {:?}",
                r.inst.name,
                r.inst.effect_text,
                v.map(|v| v == CheckVerdict::IsCause)
            ),
        );
    }
    gates.push(("5 cause checking", g));

    // 6. No cause on the fork system.
    let mut g = Gate::new();
    let fork = instances::fork().unwrap();
    let r = run(&fork, "subset", false, Duration::from_secs(60));
    g.check(matches!(r.result, Ok(None)), format!("library: {}", r.status()));
    let out = Command::new(env!("CARGO_BIN_EXE_corpkit"))
        .args(["synthesize", "--system"])
        .arg(data("fork.json"))
        .args(["--trace", "({e})^w", "--effect", "F e"])
        .output()
        .expect("run corpkit");
    g.check(
        out.status.code() == Some(2),
        format!(
            "cli exit {:?}: {}",
            out.status.code(),
            String::from_utf8_lossy(&out.stdout).lines().next().unwrap_or("")
        ),
    );
    gates.push(("6 fork system has no cause (exit 2)", g));

    // 7. Property suites.
    let mut g = Gate::new();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut failures = 0;
    for _ in 0..200 {
        let a = random_nba(&mut rng);
        let c = complement(&a).unwrap();
        let u = BoundedUniverse::new(a.alphabet().clone(), 3, 2).unwrap();
        failures += enumerate_lassos(&u)
            .filter(|w| a.accepts_lasso(w) == c.accepts_lasso(w))
            .count();
    }
    g.check(
        failures == 0,
        format!("complement XOR on 200 random automata: {failures} failures"),
    );
    let ab = Alphabet::new(["a", "b"]).unwrap();
    let words: Vec<_> = enumerate_lassos(&BoundedUniverse::new(ab.clone(), 3, 2).unwrap()).collect();
    let mut failures = 0;
    for _ in 0..200 {
        let f = random_ltl(&mut rng, 4);
        let a = ltl_to_nba(&f, &ab).unwrap();
        failures += words
            .iter()
            .filter(|w| a.accepts_lasso(w) != eval_on_lasso(&f, &ab, w).unwrap())
            .count();
    }
    g.check(
        failures == 0,
        format!("translation vs evaluation on 200 random formulas: {failures} failures"),
    );
    for inputs in [vec!["i"], vec!["i", "j"]] {
        let ok = is_subset(
            full_relation(&inputs).unwrap().nba(),
            subset_relation(&inputs).unwrap().nba(),
        )
        .unwrap();
        g.check(
            ok,
            format!("full relation contained in subset relation for {} inputs", inputs.len()),
        );
    }
    for r in &golden {
        match oracle(r) {
            Some(rep) => g.check(
                !rep.any_fail(),
                format!(
                    "oracle on {} [{}]: {}",
                    r.inst.name,
                    r.inst.effect_text,
                    oracle_summary(&rep)
                ),
            ),
            None => g.check(false, format!("oracle on {}: no cause to verify", r.inst.name)),
        }
    }
    gates.push(("7 property suites and oracle agreement", g));

    // 8. Contingencies.
    let mut g = Gate::new();
    for inst in [
        instances::example("F e").unwrap(),
        instances::example("G F e").unwrap(),
        instances::faulty().unwrap(),
    ] {
        let r = run(&inst, "subset", true, Duration::from_secs(60));
        match oracle(&r) {
            Some(rep) => {
                let same = r.matches_expected();
                g.check(
                    !rep.any_fail(),
                    format!(
                        "{} [{}]: {}; same language as without contingencies: {same}; {}",
                        inst.name,
                        inst.effect_text,
                        r.status(),
                        oracle_summary(&rep)
                    ),
                );
            }
            None => g.check(false, format!("{}: {}", r.label(), r.status())),
        }
    }
    gates.push(("8 contingencies still produce causes", g));

    let mut all = true;
    for (name, gate) in &gates {
        println!("{} criterion {name}", if gate.ok { "PASS" } else { "FAIL" });
        for d in &gate.details {
            println!("    {d}");
        }
        all &= gate.ok;
    }
    println!("acceptance finished in {:.1}s", started.elapsed().as_secs_f64());
    if !all {
        std::process::exit(1);
    }
}

fn run_clone(r: &Run) -> Run {
    Run {
        inst: r.inst.clone(),
        relation: r.relation,
        contingencies: r.contingencies,
        seconds: r.seconds,
        result: match &r.result {
            Ok(c) => Ok(c.clone()),
            Err(e) => Err(Error::InvalidArgument(e.to_string())),
        },
    }
}
