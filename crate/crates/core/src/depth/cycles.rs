//! Strongly connected components, shortest cycle witnesses, topological order.

use super::DepthRelation;
use std::collections::VecDeque;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CycleResult {
    /// Linear extension of the relation (node indices).
    Acyclic(Vec<usize>),
    /// Node indices `o_1 .. o_k` with `o_i -> o_{i+1}` and `o_k -> o_1`.
    Cycle(Vec<usize>),
}

/// Iterative Tarjan; components come out in reverse topological order.
pub fn strongly_connected_components(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comps = Vec::new();
    let mut counter = 0;
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut next)) = call.last_mut() {
            if *next < adj[v].len() {
                let w = adj[v][*next];
                *next += 1;
                if index[w] == usize::MAX {
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
                if let Some(&(u, _)) = call.last() {
                    low[u] = low[u].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comps.push(comp);
                }
            }
        }
    }
    comps
}

/// Shortest cycle through `s` inside the node set `allowed`.
fn shortest_cycle_from(adj: &[Vec<usize>], s: usize, allowed: &[bool]) -> Option<Vec<usize>> {
    let n = adj.len();
    let mut prev = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    let mut q = VecDeque::new();
    seen[s] = true;
    q.push_back(s);
    while let Some(v) = q.pop_front() {
        for &w in &adj[v] {
            if !allowed[w] {
                continue;
            }
            if w == s {
                let mut path = vec![v];
                let mut c = v;
                while c != s {
                    c = prev[c];
                    path.push(c);
                }
                path.reverse();
                return Some(path);
            }
            if !seen[w] {
                seen[w] = true;
                prev[w] = v;
                q.push_back(w);
            }
        }
    }
    None
}

/// A shortest cycle found within one nontrivial component, or a topological order.
pub fn find_cycle(rel: &DepthRelation) -> CycleResult {
    let adj = rel.adjacency();
    let n = adj.len();
    for v in 0..n {
        if adj[v].contains(&v) {
            return CycleResult::Cycle(vec![v]);
        }
    }
    let comps = strongly_connected_components(&adj);
    if let Some(comp) = comps.iter().find(|c| c.len() > 1) {
        let mut allowed = vec![false; n];
        for &v in comp {
            allowed[v] = true;
        }
        let mut best: Option<Vec<usize>> = None;
        // Bounded number of BFS roots keeps large components cheap.
        for &s in comp.iter().take(64) {
            if let Some(c) = shortest_cycle_from(&adj, s, &allowed) {
                if best.as_ref().map(|b| c.len() < b.len()).unwrap_or(true) {
                    best = Some(c);
                }
            }
        }
        return CycleResult::Cycle(best.expect("nontrivial component has a cycle"));
    }
    // Kahn's algorithm with a min-heap for a deterministic order.
    let mut indeg = vec![0usize; n];
    for v in 0..n {
        for &w in &adj[v] {
            indeg[w] += 1;
        }
    }
    let mut heap: std::collections::BinaryHeap<std::cmp::Reverse<usize>> =
        (0..n).filter(|&v| indeg[v] == 0).map(std::cmp::Reverse).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(std::cmp::Reverse(v)) = heap.pop() {
        order.push(v);
        for &w in &adj[v] {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                heap.push(std::cmp::Reverse(w));
            }
        }
    }
    debug_assert_eq!(order.len(), n);
    CycleResult::Acyclic(order)
}
