//! Strongly connected components over explicit successor lists.

/// Tarjan's algorithm, iterative. Returns the component index of every
/// node (components numbered in reverse topological order) and, per
/// component, whether it is nontrivial (contains a cycle).
pub(crate) fn scc(succ: &[Vec<usize>]) -> (Vec<usize>, Vec<bool>) {
    let n = succ.len();
    const UNVISITED: usize = usize::MAX;
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![UNVISITED; n];
    let mut stack = Vec::new();
    let mut nontrivial = Vec::new();
    let mut counter = 0;
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        call.push((root, 0));
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut next)) = call.last_mut() {
            if *next < succ[v].len() {
                let w = succ[v][*next];
                *next += 1;
                if index[w] == UNVISITED {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let id = nontrivial.len();
                    let mut size = 0;
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp[w] = id;
                        size += 1;
                        if w == v {
                            break;
                        }
                    }
                    nontrivial.push(size > 1 || succ[v].contains(&v));
                }
            }
        }
    }
    (comp, nontrivial)
}

/// Nodes reachable from `roots`.
pub(crate) fn reachable(succ: &[Vec<usize>], roots: impl IntoIterator<Item = usize>) -> Vec<bool> {
    let mut seen = vec![false; succ.len()];
    let mut todo: Vec<usize> = Vec::new();
    for r in roots {
        if !seen[r] {
            seen[r] = true;
            todo.push(r);
        }
    }
    while let Some(v) = todo.pop() {
        for &w in &succ[v] {
            if !seen[w] {
                seen[w] = true;
                todo.push(w);
            }
        }
    }
    seen
}

/// Nodes that can reach some node in `targets`.
pub(crate) fn coreachable(succ: &[Vec<usize>], targets: &[bool]) -> Vec<bool> {
    let n = succ.len();
    let mut pred = vec![Vec::new(); n];
    for (v, ws) in succ.iter().enumerate() {
        for &w in ws {
            pred[w].push(v);
        }
    }
    reachable(&pred, (0..n).filter(|&v| targets[v]))
}

/// Nodes lying on or leading to a cycle through a node marked `good`,
/// restricted to nodes reachable from `roots`.
pub(crate) fn live_nodes(
    succ: &[Vec<usize>],
    roots: impl IntoIterator<Item = usize>,
    good: impl Fn(usize) -> bool,
) -> Vec<bool> {
    let reach = reachable(succ, roots);
    let (comp, nontrivial) = scc(succ);
    let mut good_comp = vec![false; nontrivial.len()];
    for v in 0..succ.len() {
        if reach[v] && nontrivial[comp[v]] && good(v) {
            good_comp[comp[v]] = true;
        }
    }
    let targets: Vec<bool> = (0..succ.len()).map(|v| reach[v] && good_comp[comp[v]]).collect();
    let co = coreachable(succ, &targets);
    (0..succ.len()).map(|v| reach[v] && co[v]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn components() {
        // 0 -> 1 -> 2 -> 1, 2 -> 3, 3 -> 3
        let succ = vec![vec![1], vec![2], vec![1, 3], vec![3]];
        let (comp, nt) = scc(&succ);
        assert_eq!(comp[1], comp[2]);
        assert_ne!(comp[0], comp[1]);
        assert!(!nt[comp[0]]);
        assert!(nt[comp[1]]);
        assert!(nt[comp[3]]);
    }

    #[test]
    fn live() {
        let succ = vec![vec![1, 2], vec![1], vec![]];
        let l = live_nodes(&succ, [0], |v| v == 1);
        assert_eq!(l, vec![true, true, false]);
        let none = live_nodes(&succ, [0], |v| v == 2);
        assert_eq!(none, vec![false, false, false]);
    }
}
