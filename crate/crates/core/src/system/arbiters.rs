//! Parameterized resource arbiters. Client `k` requests with `r_k` and is
//! granted with `g_k`; at most one grant is given per step.

use std::collections::HashMap;

use super::{System, SystemBuilder};
use crate::alphabet::{submasks, Letter};
use crate::error::{Error, Result};
use crate::guard::{Cube, Guard};

fn check_n(n: usize, min: usize) -> Result<()> {
    if n < min {
        return Err(Error::InvalidArgument(format!(
            "arbiter needs at least {min} clients, got {n}"
        )));
    }
    Ok(())
}

/// Grants every client in turn, ignoring requests. `n` states; the first
/// trace position grants `g_0`.
pub fn make_spurious(n: usize) -> Result<System> {
    check_n(n, 1)?;
    let inputs: Vec<String> = (0..n).map(|k| format!("r_{k}")).collect();
    let outputs: Vec<String> = (0..n).map(|k| format!("g_{k}")).collect();
    let mut b = SystemBuilder::new(inputs, outputs.clone());
    for (k, g) in outputs.iter().enumerate() {
        b.state(format!("grant_{k}"), &[g]);
    }
    b.initial(n - 1);
    for k in 0..n {
        b.edge(k, Guard::verum(), (k + 1) % n);
    }
    b.build()
}

/// Grants the prioritized client whenever it requests and otherwise
/// serves the remaining `n - 1` clients round-robin. `2(n - 1)` states.
pub fn make_unfair(n: usize) -> Result<System> {
    check_n(n, 2)?;
    let m = n - 1;
    let inputs: Vec<String> = std::iter::once("r_prio".to_string())
        .chain((0..m).map(|k| format!("r_{k}")))
        .collect();
    let outputs: Vec<String> = std::iter::once("g_prio".to_string())
        .chain((0..m).map(|k| format!("g_{k}")))
        .collect();
    let mut b = SystemBuilder::new(inputs, outputs.clone());
    // prio[p]: granted the prioritized client, pointer at p.
    // served[p]: granted client p, pointer at p + 1.
    let prio: Vec<usize> = (0..m).map(|p| b.state(format!("prio_{p}"), &["g_prio"])).collect();
    let served: Vec<usize> = (0..m)
        .map(|p| b.state(format!("served_{p}"), &[&outputs[p + 1]]))
        .collect();
    b.initial(prio[0]);
    let req = Guard::literal(0, true);
    let no_req = Guard::literal(0, false);
    for p in 0..m {
        let next = (p + 1) % m;
        b.edge(prio[p], req.clone(), prio[p]);
        b.edge(prio[p], no_req.clone(), served[p]);
        b.edge(served[p], req.clone(), prio[next]);
        b.edge(served[p], no_req.clone(), served[next]);
    }
    b.build()
}

/// A functional round-robin arbiter: requests are remembered until
/// granted, and only pending requests are granted. The state records the
/// pending set, the current grant and the round-robin pointer.
pub fn make_full(n: usize) -> Result<System> {
    check_n(n, 1)?;
    let inputs: Vec<String> = (0..n).map(|k| format!("r_{k}")).collect();
    let outputs: Vec<String> = (0..n).map(|k| format!("g_{k}")).collect();
    let mut b = SystemBuilder::new(inputs, outputs.clone());
    type Key = (u64, Option<usize>, usize);
    let mut index: HashMap<Key, usize> = HashMap::new();
    let mut todo: Vec<Key> = Vec::new();
    let mut state = |key: Key, b: &mut SystemBuilder, todo: &mut Vec<Key>| -> usize {
        *index.entry(key).or_insert_with(|| {
            todo.push(key);
            let (pending, grant, ptr) = key;
            let label: Vec<&str> = grant.iter().map(|&g| outputs[g].as_str()).collect();
            let name = format!(
                "p{pending:0width$b}_g{}_n{ptr}",
                grant.map_or("-".to_string(), |g| g.to_string()),
                width = n
            );
            b.state(name, &label)
        })
    };
    let init = state((0, None, 0), &mut b, &mut todo);
    b.initial(init);
    let all = (1u64 << n) - 1;
    while let Some(key @ (pending, _, ptr)) = todo.pop() {
        let src = state(key, &mut b, &mut todo);
        let mut by_target: HashMap<usize, Vec<Cube>> = HashMap::new();
        for req in submasks(all) {
            let open = pending | req;
            let next = (0..n).map(|d| (ptr + d) % n).find(|&c| open >> c & 1 == 1);
            let succ = match next {
                Some(c) => (open & !(1 << c), Some(c), (c + 1) % n),
                None => (open, None, ptr),
            };
            let dst = state(succ, &mut b, &mut todo);
            by_target.entry(dst).or_default().push(Cube::exact(Letter(req), all));
        }
        let mut targets: Vec<_> = by_target.into_iter().collect();
        targets.sort_by_key(|(t, _)| *t);
        for (t, cubes) in targets {
            b.edge(src, Guard::from_cubes(cubes), t);
        }
    }
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lasso::LassoWord;

    fn at_most_one_grant(t: &System) -> bool {
        (0..t.num_states()).all(|q| t.label(q).0.count_ones() <= 1)
    }

    #[test]
    fn state_counts() {
        for n in 1..=4 {
            let t = make_spurious(n).unwrap();
            assert_eq!(t.num_states(), n);
            assert!(at_most_one_grant(&t));
        }
        for (n, expect) in [(2, 2), (3, 4), (4, 6)] {
            let t = make_unfair(n).unwrap();
            assert_eq!(t.num_states(), expect);
            assert!(at_most_one_grant(&t));
        }
        for n in 1..=3 {
            assert!(at_most_one_grant(&make_full(n).unwrap()));
        }
        assert!(make_spurious(0).is_err());
        assert!(make_unfair(1).is_err());
    }

    #[test]
    fn spurious_one_always_grants() {
        let t = make_spurious(1).unwrap();
        assert_eq!(t.alphabet().format_letter(t.label(0)), "{g_0}");
    }

    #[test]
    fn unfair_serves_only_priority_under_full_load() {
        let t = make_unfair(2).unwrap();
        let ab = t.alphabet().clone();
        let rho = LassoWord::parse("({r_prio,r_0})^w", &ab).unwrap();
        let c = t.complete_trace(&rho, 10);
        let pi = c.unique().expect("deterministic system");
        assert!(pi.same_word(&LassoWord::parse("({r_prio,r_0,g_prio})^w", &ab).unwrap()));
    }

    #[test]
    fn full_arbiter_grants_only_requests() {
        let t = make_full(2).unwrap();
        let ab = t.alphabet().clone();
        let idle = LassoWord::parse("({})^w", &ab).unwrap();
        let c = t.complete_trace(&idle, 10);
        assert!(c.unique().unwrap().same_word(&idle));
        let busy = LassoWord::parse("({r_0,r_1})^w", &ab).unwrap();
        let c = t.complete_trace(&busy, 10);
        let expect = LassoWord::parse("({r_0,r_1,g_0};{r_0,r_1,g_1})^w", &ab).unwrap();
        assert!(c.unique().unwrap().same_word(&expect));
    }
}
