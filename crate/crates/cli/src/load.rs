use std::path::Path;

use anyhow::{bail, Context, Result};

use corpkit_core::automata::parse_hoa;
use corpkit_core::ltl::{parse_ltl, ApUniverse, Ltl};
use corpkit_core::similarity::{full_relation, subset_relation};
use corpkit_core::{Alphabet, LassoWord, Property, SimilarityRelation, System};

pub struct Loaded {
    pub system: System,
    pub trace: LassoWord,
    pub effect: Property,
    pub relation: SimilarityRelation,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// Text that names an existing file is read from it.
fn literal_or_file(arg: &str) -> Result<String> {
    let p = Path::new(arg);
    if p.is_file() {
        Ok(read(p)?.trim().to_string())
    } else {
        Ok(arg.to_string())
    }
}

fn looks_like_hoa(arg: &str) -> bool {
    let p = Path::new(arg);
    p.is_file() && p.extension().is_some_and(|e| e.eq_ignore_ascii_case("hoa"))
}

/// An LTL formula over `atoms`, or an automaton read from an `.hoa` file.
fn property(arg: &str, atoms: &[String], what: &str) -> Result<Property> {
    if looks_like_hoa(arg) {
        let nba = parse_hoa(&read(Path::new(arg))?).with_context(|| format!("parsing {what} automaton {arg}"))?;
        return Ok(Property::Automaton(nba));
    }
    let text = literal_or_file(arg)?;
    let f = parse_ltl(&text, ApUniverse::Closed(atoms)).with_context(|| format!("parsing {what} `{text}`"))?;
    Ok(Property::Formula(f))
}

pub fn relation(spec: &str, system: &System) -> Result<SimilarityRelation> {
    let inputs = system.inputs();
    Ok(match spec {
        "subset" => subset_relation(inputs)?,
        "full" => full_relation(inputs)?,
        other => match other.strip_prefix("custom:") {
            Some(path) => {
                let nba = parse_hoa(&read(Path::new(path))?).with_context(|| format!("parsing relation {path}"))?;
                SimilarityRelation::custom(format!("custom:{path}"), inputs, &nba)?
            }
            None => bail!("unknown relation `{other}` (expected subset, full or custom:<path>)"),
        },
    })
}

pub fn instance(i: &crate::Instance) -> Result<Loaded> {
    let system =
        System::from_json(&read(&i.system)?).with_context(|| format!("loading system {}", i.system.display()))?;
    let text = literal_or_file(&i.trace)?;
    let trace = LassoWord::parse(&text, system.alphabet()).with_context(|| format!("parsing trace `{text}`"))?;
    let effect = property(&i.effect, system.alphabet().symbols(), "effect")?;
    let relation = relation(&i.relation, &system)?;
    Ok(Loaded {
        system,
        trace,
        effect,
        relation,
    })
}

pub fn candidate(arg: &str, system: &System) -> Result<Property> {
    property(arg, system.inputs(), "candidate")
}

pub fn formula_with_aps(text: &str, aps: Option<&str>) -> Result<(Ltl, Alphabet)> {
    let text = literal_or_file(text)?;
    match aps {
        Some(list) => {
            let names: Vec<String> = list
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(String::from)
                .collect();
            let f = parse_ltl(&text, ApUniverse::Closed(&names))?;
            Ok((f, Alphabet::new(names)?))
        }
        None => {
            let f = parse_ltl(&text, ApUniverse::Open)?;
            let ab = Alphabet::new(f.atoms())?;
            Ok((f, ab))
        }
    }
}
