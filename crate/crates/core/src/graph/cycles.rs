//! Exact short-cycle detection by depth-bounded breadth-first search.
//!
//! From each source, a non-tree edge `(u, w)` closes a closed walk of length
//! `dist(u) + dist(w) + 1` that contains a cycle at most that long, and from
//! any vertex of a shortest cycle the bound is attained. Minimizing over all
//! sources therefore gives the exact girth; limiting the depth to `t / 2`
//! keeps every cycle of length at most `t` visible.

use std::collections::HashMap;

use super::BoundedDegreeGraph;

/// Length of the shortest cycle of length at most `t` in the graph given by
/// `vertices` and `neighbors`, if any.
pub fn shortest_cycle_leq<V, F, I>(vertices: V, neighbors: F, t: usize) -> Option<usize>
where
    V: IntoIterator<Item = usize>,
    F: Fn(usize) -> I,
    I: IntoIterator<Item = usize>,
{
    if t < 3 {
        return None;
    }
    let limit = t / 2;
    let mut best: Option<usize> = None;
    let mut dist: HashMap<usize, (usize, usize)> = HashMap::new();
    let mut queue = Vec::new();
    for source in vertices {
        dist.clear();
        queue.clear();
        dist.insert(source, (0, usize::MAX));
        queue.push(source);
        let mut head = 0;
        while head < queue.len() {
            let u = queue[head];
            head += 1;
            let (du, parent) = dist[&u];
            for w in neighbors(u) {
                if w == parent {
                    continue;
                }
                match dist.get(&w) {
                    Some(&(dw, _)) => {
                        let len = du + dw + 1;
                        if len <= t && best.is_none_or(|b| len < b) {
                            best = Some(len);
                        }
                    }
                    None if du < limit => {
                        dist.insert(w, (du + 1, u));
                        queue.push(w);
                    }
                    None => {}
                }
            }
        }
        if best == Some(3) {
            break;
        }
    }
    best
}

pub fn has_cycle_leq(graph: &BoundedDegreeGraph, t: usize) -> bool {
    shortest_cycle_leq(
        0..graph.n(),
        |v| graph.neighbors(v).iter().map(|&u| u as usize),
        t,
    )
    .is_some()
}

pub fn girth(graph: &BoundedDegreeGraph) -> Option<usize> {
    shortest_cycle_leq(
        0..graph.n(),
        |v| graph.neighbors(v).iter().map(|&u| u as usize),
        graph.n(),
    )
}
