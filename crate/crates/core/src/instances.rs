//! Reference instances: the introductory four-state example, the faulty
//! two-state system, the nondeterministic fork and the arbiter families.
//! Each carries the expected cause language when it is known.

use crate::error::Result;
use crate::lasso::LassoWord;
use crate::ltl::{parse_ltl, ApUniverse, Ltl};
use crate::synthesis::Property;
use crate::system::{make_full, make_spurious, make_unfair, System};

pub const EXAMPLE_JSON: &str = include_str!("../../../data/example.json");
pub const FAULTY_JSON: &str = include_str!("../../../data/faulty.json");
pub const FORK_JSON: &str = include_str!("../../../data/fork.json");

/// What synthesis should produce.
#[derive(Clone, Debug)]
pub enum Expected {
    /// A cause language-equivalent to this formula over the inputs.
    Cause(Ltl),
    NoCause,
    Unknown,
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub name: String,
    pub system: System,
    pub trace: LassoWord,
    pub effect_text: String,
    pub effect: Property,
    pub expected: Expected,
}

impl Instance {
    fn new(name: &str, system: System, trace: &str, effect: &str, expected: Option<&str>) -> Result<Instance> {
        let trace = LassoWord::parse(trace, system.alphabet())?;
        let atoms = system.alphabet().symbols();
        let effect_ltl = parse_ltl(effect, ApUniverse::Closed(atoms))?;
        let expected = match expected {
            Some(f) => Expected::Cause(parse_ltl(f, ApUniverse::Closed(system.inputs()))?),
            None => Expected::NoCause,
        };
        Ok(Instance {
            name: name.to_string(),
            system,
            trace,
            effect_text: effect.to_string(),
            effect: Property::Formula(effect_ltl),
            expected,
        })
    }

    /// `|T|`, the number of system states.
    pub fn system_size(&self) -> usize {
        self.system.num_states()
    }
}

/// The four-state example on `({x,e})^ω` with effect `F e` or `G F e`.
pub fn example(effect: &str) -> Result<Instance> {
    let expected = match effect.split_whitespace().collect::<String>().as_str() {
        "Fe" => Some("F x"),
        "GFe" => Some("G F x"),
        _ => None,
    };
    let mut inst = Instance::new(
        &format!("example {effect}"),
        System::from_json(EXAMPLE_JSON)?,
        "({x,e})^w",
        effect,
        expected,
    )?;
    if expected.is_none() {
        inst.expected = Expected::Unknown;
    }
    Ok(inst)
}

/// The faulty two-state system with the trace and effect of the
/// motivating fault-localization example.
pub fn faulty() -> Result<Instance> {
    Instance::new(
        "faulty",
        System::from_json(FAULTY_JSON)?,
        "{i2};{};{i0,o4};({i2,o4})^w",
        "!((i2 U i0) <-> G F o4)",
        Some("!i0 & X(!i0 & !i2 & X i0)"),
    )
}

/// One input letter leads both to an `e` state and to a state without
/// `e`, so no cause for `F e` exists.
pub fn fork() -> Result<Instance> {
    Instance::new("fork", System::from_json(FORK_JSON)?, "({e})^w", "F e", None)
}

/// The unique trace on which every client requests at every step.
pub fn all_requests_trace(system: &System) -> Result<LassoWord> {
    let rho = LassoWord::constant(crate::alphabet::Letter(system.input_mask()));
    let completions = system.complete_trace(&rho, 2);
    match completions.unique() {
        Some(pi) => Ok(pi.clone()),
        None => Err(crate::error::Error::InvalidTrace(
            "the all-requests input has no unique completion".into(),
        )),
    }
}

fn arbiter(name: String, system: System, effect: &str, expected: &str) -> Result<Instance> {
    let pi = all_requests_trace(&system)?.display(system.alphabet());
    Instance::new(&name, system, &pi, effect, Some(expected))
}

/// Arbiter rows: spurious and full for `1..=max_n`, unfair for
/// `2..=max_n`, in table order.
pub fn arbiter_instances(max_n: usize) -> Result<Vec<Instance>> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        out.push(arbiter(format!("Spurious {n}"), make_spurious(n)?, "F g_0", "true")?);
    }
    for n in 2..=max_n {
        out.push(arbiter(format!("Unfair {n}"), make_unfair(n)?, "G !g_0", "G r_prio")?);
    }
    for n in 1..=max_n {
        out.push(arbiter(format!("Full {n}"), make_full(n)?, "F g_0", "F r_0")?);
        out.push(arbiter(format!("Full {n}"), make_full(n)?, "G F g_0", "G F r_0")?);
    }
    Ok(out)
}

/// The examples with known causes plus the arbiter rows up to `max_n`.
pub fn golden_suite(max_n: usize) -> Result<Vec<Instance>> {
    let mut out = vec![example("F e")?, example("G F e")?, faulty()?];
    out.extend(arbiter_instances(max_n)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arbiter_traces() {
        let rows = arbiter_instances(2).unwrap();
        let names: Vec<_> = rows.iter().map(|r| r.name.as_str()).collect();
        assert_eq!(
            names,
            [
                "Spurious 1",
                "Spurious 2",
                "Unfair 2",
                "Full 1",
                "Full 1",
                "Full 2",
                "Full 2"
            ]
        );
        let unfair = &rows[2];
        let expect = LassoWord::parse("({r_prio,r_0,g_prio})^w", unfair.system.alphabet()).unwrap();
        assert!(unfair.trace.same_word(&expect));
        for r in &rows {
            assert!(r.system.validate_trace(&r.trace).unwrap());
        }
    }

    #[test]
    fn examples_load() {
        for inst in [example("F e").unwrap(), faulty().unwrap(), fork().unwrap()] {
            assert!(inst.system.validate_trace(&inst.trace).unwrap(), "{}", inst.name);
        }
        assert!(matches!(fork().unwrap().expected, Expected::NoCause));
    }
}
