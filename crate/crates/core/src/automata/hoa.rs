//! Hanoi Omega-Automata (HOA v1) subset: state-based Büchi acceptance
//! with explicit edge labels.

use std::fmt::Write as _;

use super::Nba;
use crate::alphabet::Alphabet;
use crate::error::{Error, Result};
use crate::guard::{parse_guard, Guard};

/// Deterministic rendering: states in index order, edges sorted by target
/// and then by label text.
pub fn emit_hoa(a: &Nba) -> String {
    let mut out = String::new();
    let empty = a.num_states() == 0;
    let n = if empty { 1 } else { a.num_states() };
    writeln!(out, "HOA: v1").unwrap();
    writeln!(out, "States: {n}").unwrap();
    if empty {
        writeln!(out, "Start: 0").unwrap();
    }
    for &q in a.initial_states() {
        writeln!(out, "Start: {q}").unwrap();
    }
    write!(out, "AP: {}", a.alphabet().len()).unwrap();
    for s in a.alphabet().symbols() {
        write!(out, " \"{s}\"").unwrap();
    }
    out.push('\n');
    out.push_str("acc-name: Buchi\n");
    out.push_str("Acceptance: 1 Inf(0)\n");
    out.push_str("properties: trans-labels explicit-labels state-acc\n");
    out.push_str("--BODY--\n");
    if empty {
        out.push_str("State: 0\n");
    }
    for q in 0..a.num_states() {
        if a.is_accepting(q) {
            writeln!(out, "State: {q} {{0}}").unwrap();
        } else {
            writeln!(out, "State: {q}").unwrap();
        }
        let mut edges: Vec<(usize, String)> = a.edges(q).iter().map(|e| (e.target, e.guard.to_hoa())).collect();
        edges.sort();
        for (t, g) in edges {
            writeln!(out, "[{g}] {t}").unwrap();
        }
    }
    out.push_str("--END--\n");
    out
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Header(String),
    Str(String),
    Int(usize),
    Ident(String),
    Label(String),
    AccSet(Vec<usize>),
    Punct(char),
    Body,
    End,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let b = text.as_bytes();
    let mut i = 0;
    let mut out = Vec::new();
    let err = |pos: usize, msg: &str| Error::Hoa(format!("offset {pos}: {msg}"));
    while i < b.len() {
        let c = b[i];
        let start = i;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c == b'/' && b.get(i + 1) == Some(&b'*') {
            let end = text[i + 2..].find("*/").ok_or_else(|| err(i, "unterminated comment"))?;
            i += end + 4;
        } else if c == b'"' {
            i += 1;
            let mut s = String::new();
            while i < b.len() && b[i] != b'"' {
                if b[i] == b'\\' && i + 1 < b.len() {
                    i += 1;
                }
                s.push(b[i] as char);
                i += 1;
            }
            if i >= b.len() {
                return Err(err(start, "unterminated string"));
            }
            i += 1;
            out.push((start, Tok::Str(s)));
        } else if text[i..].starts_with("--BODY--") {
            i += 8;
            out.push((start, Tok::Body));
        } else if text[i..].starts_with("--END--") {
            i += 7;
            out.push((start, Tok::End));
        } else if c == b'[' {
            let end = text[i..].find(']').ok_or_else(|| err(i, "unterminated label"))?;
            out.push((start, Tok::Label(text[i + 1..i + end].to_string())));
            i += end + 1;
        } else if c == b'{' {
            let end = text[i..]
                .find('}')
                .ok_or_else(|| err(i, "unterminated acceptance set"))?;
            let sets = text[i + 1..i + end]
                .split_whitespace()
                .map(|s| s.parse::<usize>().map_err(|_| err(i, "bad acceptance set")))
                .collect::<Result<Vec<_>>>()?;
            out.push((start, Tok::AccSet(sets)));
            i += end + 1;
        } else if c.is_ascii_digit() {
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            let v = text[start..i].parse().map_err(|_| err(start, "integer too large"))?;
            out.push((start, Tok::Int(v)));
        } else if c.is_ascii_alphabetic() || c == b'_' || c == b'@' {
            while i < b.len() && (b[i].is_ascii_alphanumeric() || matches!(b[i], b'_' | b'-' | b'@')) {
                i += 1;
            }
            let word = text[start..i].to_string();
            if b.get(i) == Some(&b':') {
                i += 1;
                out.push((start, Tok::Header(word)));
            } else {
                out.push((start, Tok::Ident(word)));
            }
        } else {
            i += 1;
            out.push((start, Tok::Punct(c as char)));
        }
    }
    Ok(out)
}

/// Parses a HOA automaton with `Acceptance: 1 Inf(0)`, state-based
/// acceptance marks and explicit edge labels.
pub fn parse_hoa(text: &str) -> Result<Nba> {
    let toks = lex(text)?;
    let mut pos = 0;
    let mut states: Option<usize> = None;
    let mut start: Vec<usize> = Vec::new();
    let mut aps: Option<Vec<String>> = None;
    let mut acceptance: Option<String> = None;
    let mut seen_version = false;

    // Header: each item runs until the next header token or --BODY--.
    while pos < toks.len() && toks[pos].1 != Tok::Body {
        let (at, tok) = &toks[pos];
        let Tok::Header(name) = tok else {
            return Err(Error::Hoa(format!("offset {at}: expected a header item")));
        };
        let mut end = pos + 1;
        while end < toks.len() && !matches!(toks[end].1, Tok::Header(_) | Tok::Body) {
            end += 1;
        }
        let args = &toks[pos + 1..end];
        match name.as_str() {
            "HOA" => {
                if !matches!(args, [(_, Tok::Ident(v))] if v == "v1") {
                    return Err(Error::Hoa("only HOA v1 is supported".into()));
                }
                seen_version = true;
            }
            "States" => match args {
                [(_, Tok::Int(n))] => states = Some(*n),
                _ => return Err(Error::Hoa("States: expects one integer".into())),
            },
            "Start" => match args {
                [(_, Tok::Int(n))] => start.push(*n),
                _ => {
                    return Err(Error::Hoa(
                        "Start: expects a single state (conjunctions are not supported)".into(),
                    ))
                }
            },
            "AP" => {
                let Some((_, Tok::Int(n))) = args.first() else {
                    return Err(Error::Hoa("AP: expects a count".into()));
                };
                let names: Vec<String> = args[1..]
                    .iter()
                    .map(|(_, t)| match t {
                        Tok::Str(s) => Ok(s.clone()),
                        _ => Err(Error::Hoa("AP: names must be quoted".into())),
                    })
                    .collect::<Result<_>>()?;
                if names.len() != *n {
                    return Err(Error::Hoa(format!(
                        "AP: declares {n} propositions but lists {}",
                        names.len()
                    )));
                }
                aps = Some(names);
            }
            "Acceptance" => {
                let s: String = text
                    [args.first().map_or(toks[pos].0, |t| t.0)..toks.get(end).map_or(text.len(), |t| t.0)]
                    .chars()
                    .filter(|c| !c.is_whitespace())
                    .collect();
                acceptance = Some(s);
            }
            "Alias" => return Err(Error::Hoa("Alias: is not supported".into())),
            "acc-name" => {
                if let [(_, Tok::Ident(v)), ..] = args {
                    if v != "Buchi" {
                        return Err(Error::UnsupportedAcceptance(format!("acc-name: {v}")));
                    }
                }
            }
            _ => {}
        }
        pos = end;
    }
    if !seen_version {
        return Err(Error::Hoa("missing `HOA: v1` header".into()));
    }
    match acceptance.as_deref() {
        Some("1Inf(0)") => {}
        Some(other) => return Err(Error::UnsupportedAcceptance(other.to_string())),
        None => return Err(Error::Hoa("missing Acceptance: header".into())),
    }
    if pos >= toks.len() {
        return Err(Error::Hoa("missing --BODY--".into()));
    }
    pos += 1;
    let aps = aps.unwrap_or_default();
    let alphabet = Alphabet::new(aps.iter().cloned())?;
    let mut a = Nba::new(alphabet);
    let n = states.ok_or_else(|| Error::Hoa("missing States: header".into()))?;
    for _ in 0..n {
        a.add_state(false);
    }
    for &q in &start {
        if q >= n {
            return Err(Error::Hoa(format!("start state {q} out of range")));
        }
        a.add_initial(q);
    }

    let mut current: Option<usize> = None;
    loop {
        let Some((at, tok)) = toks.get(pos) else {
            return Err(Error::Hoa("missing --END--".into()));
        };
        match tok {
            Tok::End => break,
            Tok::Header(h) if h == "State" => {
                pos += 1;
                if let Some((_, Tok::Label(_))) = toks.get(pos) {
                    return Err(Error::Hoa("state labels are not supported".into()));
                }
                let Some((_, Tok::Int(q))) = toks.get(pos) else {
                    return Err(Error::Hoa(format!("offset {at}: State: expects a number")));
                };
                let q = *q;
                if q >= n {
                    return Err(Error::Hoa(format!("state {q} out of range")));
                }
                pos += 1;
                if let Some((_, Tok::Str(_))) = toks.get(pos) {
                    pos += 1;
                }
                if let Some((_, Tok::AccSet(sets))) = toks.get(pos) {
                    if sets.iter().any(|&s| s != 0) {
                        return Err(Error::Hoa(format!("unknown acceptance set in {sets:?}")));
                    }
                    a.set_accepting(q, !sets.is_empty());
                    pos += 1;
                }
                current = Some(q);
            }
            Tok::Label(label) => {
                let q = current.ok_or_else(|| Error::Hoa("edge before State:".into()))?;
                let guard = parse_label(label, aps.len())?;
                pos += 1;
                let Some((_, Tok::Int(t))) = toks.get(pos) else {
                    return Err(Error::Hoa("edge target must be a single state".into()));
                };
                if *t >= n {
                    return Err(Error::Hoa(format!("edge target {t} out of range")));
                }
                a.add_edge(q, guard, *t);
                pos += 1;
                if let Some((_, Tok::AccSet(_))) = toks.get(pos) {
                    return Err(Error::UnsupportedAcceptance("transition-based acceptance marks".into()));
                }
            }
            Tok::Int(_) => {
                return Err(Error::Hoa(format!(
                    "offset {at}: implicit edge labels are not supported"
                )))
            }
            _ => return Err(Error::Hoa(format!("offset {at}: unexpected token in body"))),
        }
    }
    Ok(a)
}

fn parse_label(label: &str, num_aps: usize) -> Result<Guard> {
    parse_guard(label, &[("t", true), ("f", false)], |atom| {
        let i: usize = atom
            .parse()
            .map_err(|_| Error::Hoa(format!("label atom `{atom}` is not an AP index")))?;
        if i >= num_aps {
            return Err(Error::Hoa(format!("AP index {i} out of range")));
        }
        Ok(i)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn universal_emits_buchi_header() {
        let a = Nba::universal(Alphabet::new(["x"]).unwrap());
        let text = emit_hoa(&a);
        assert!(text.contains("Acceptance: 1 Inf(0)"));
        assert!(text.contains("[t] 0"));
        let b = parse_hoa(&text).unwrap();
        assert_eq!(emit_hoa(&b), text);
    }

    #[test]
    fn rejects_other_acceptance() {
        let text = "HOA: v1\nStates: 1\nStart: 0\nAP: 0\nAcceptance: 2 Inf(0)&Inf(1)\n--BODY--\nState: 0\n--END--\n";
        assert!(matches!(parse_hoa(text), Err(Error::UnsupportedAcceptance(_))));
    }

    #[test]
    fn rejects_alias_and_implicit_labels() {
        let alias = "HOA: v1\nStates: 1\nAlias: @a 0\nAP: 1 \"x\"\nAcceptance: 1 Inf(0)\n--BODY--\nState: 0\n--END--\n";
        assert!(parse_hoa(alias).is_err());
        let implicit =
            "HOA: v1\nStates: 1\nStart: 0\nAP: 1 \"x\"\nAcceptance: 1 Inf(0)\n--BODY--\nState: 0 {0}\n0\n0\n--END--\n";
        assert!(parse_hoa(implicit).is_err());
        let trans =
            "HOA: v1\nStates: 1\nStart: 0\nAP: 1 \"x\"\nAcceptance: 1 Inf(0)\n--BODY--\nState: 0\n[t] 0 {0}\n--END--\n";
        assert!(matches!(parse_hoa(trans), Err(Error::UnsupportedAcceptance(_))));
    }

    #[test]
    fn parses_comments_and_names() {
        let text = "HOA: v1 /* c */\nname: \"F x\"\nStates: 2\nStart: 0\nAP: 1 \"x\"\nacc-name: Buchi\nAcceptance: 1 Inf(0)\n--BODY--\nState: 0 \"init\"\n[!0] 0\n[0] 1\nState: 1 {0}\n[t] 1\n--END--\n";
        let a = parse_hoa(text).unwrap();
        assert_eq!(a.num_states(), 2);
        assert!(a.is_accepting(1));
        assert_eq!(a.edges(0).len(), 2);
    }
}
