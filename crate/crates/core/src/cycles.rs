//! Shortest cycles in the interior multigraph and greedy extraction of
//! pairwise edge-disjoint cycles.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use serde::Serialize;

use crate::graph::{EdgeId, PantsGraph, VertexId};

const NONE: usize = usize::MAX;

/// Pairwise edge-disjoint embedded cycles; each cycle lists its edges in
/// cyclic order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CycleSet {
    pub cycles: Vec<Vec<EdgeId>>,
}

impl CycleSet {
    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    /// No edge appears in two cycles.
    pub fn is_edge_disjoint(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.cycles.iter().flatten().all(|e| seen.insert(*e))
    }
}

/// Shortest cycle through `root` using only edges with `alive[e]`.
///
/// Stops early once no cycle shorter than `bound` can be found; returns
/// `None` when there is no cycle through `root` of length `< bound`.
pub fn shortest_cycle_through(
    graph: &PantsGraph,
    alive: &[bool],
    root: VertexId,
    bound: usize,
) -> Option<Vec<EdgeId>> {
    let n = graph.vertex_count();
    let mut dist = vec![NONE; n];
    let mut parent = vec![NONE; n];
    let mut branch = vec![NONE; n];
    dist[root] = 0;
    let mut queue = VecDeque::from([root]);
    let mut best: Option<(usize, VertexId, EdgeId, VertexId)> = None;
    let mut best_len = bound;
    while let Some(u) = queue.pop_front() {
        if 2 * dist[u] >= best_len {
            break;
        }
        for &h in graph.incident(u) {
            let e = graph.edge_of(h);
            if !alive[e] || e == parent[u] {
                continue;
            }
            let w = graph.across(h);
            if dist[w] == NONE {
                dist[w] = dist[u] + 1;
                parent[w] = e;
                branch[w] = if u == root { w } else { branch[u] };
                queue.push_back(w);
                continue;
            }
            let through_root = if u == w {
                u == root
            } else {
                u == root || w == root || branch[u] != branch[w]
            };
            if !through_root {
                continue;
            }
            let len = dist[u] + dist[w] + 1;
            if len < best_len {
                best_len = len;
                best = Some((len, u, e, w));
            }
        }
    }
    let (_, u, e, w) = best?;
    let chain = |mut x: VertexId| {
        let mut edges = Vec::new();
        while x != root {
            let pe = parent[x];
            edges.push(pe);
            let [a, b] = graph.edge(pe);
            x = if graph.owner(a) == x {
                graph.owner(b)
            } else {
                graph.owner(a)
            };
        }
        edges
    };
    let mut cycle: Vec<EdgeId> = chain(u).into_iter().rev().collect();
    cycle.push(e);
    cycle.extend(chain(w));
    Some(cycle)
}

/// Marks vertices that lie in the 2-core of the alive interior subgraph.
fn two_core(graph: &PantsGraph, alive: &[bool]) -> Vec<bool> {
    let n = graph.vertex_count();
    let mut degree = vec![0usize; n];
    for e in 0..graph.edge_count() {
        if alive[e] {
            let (a, b) = graph.endpoints(e);
            if a == b {
                degree[a] += 2;
            } else {
                degree[a] += 1;
                degree[b] += 1;
            }
        }
    }
    let mut in_core = vec![true; n];
    let mut stack: Vec<VertexId> = (0..n).filter(|&v| degree[v] < 2).collect();
    while let Some(v) = stack.pop() {
        if !in_core[v] {
            continue;
        }
        in_core[v] = false;
        for &h in graph.incident(v) {
            let e = graph.edge_of(h);
            if !alive[e] {
                continue;
            }
            let w = graph.across(h);
            if w != v && in_core[w] {
                degree[w] -= 1;
                if degree[w] < 2 {
                    stack.push(w);
                }
            }
        }
    }
    in_core
}

/// Mask of interior edges (leaf edges never lie on cycles).
pub fn interior_mask(graph: &PantsGraph) -> Vec<bool> {
    (0..graph.edge_count())
        .map(|e| graph.is_interior_edge(e))
        .collect()
}

/// A globally shortest cycle among alive edges.
pub fn shortest_cycle(graph: &PantsGraph, alive: &[bool]) -> Option<Vec<EdgeId>> {
    let alive: Vec<bool> = alive
        .iter()
        .enumerate()
        .map(|(e, &a)| a && graph.is_interior_edge(e))
        .collect();
    let core = two_core(graph, &alive);
    let mut best: Option<Vec<EdgeId>> = None;
    for r in (0..graph.vertex_count()).filter(|&v| core[v]) {
        let bound = best.as_ref().map_or(usize::MAX, |c| c.len());
        if let Some(c) = shortest_cycle_through(graph, &alive, r, bound) {
            let done = c.len() == 1;
            best = Some(c);
            if done {
                break;
            }
        }
    }
    best
}

/// Greedy extraction: repeatedly take a globally shortest cycle and delete
/// its edges. Only edges with `allowed[e]` participate.
pub fn greedy_disjoint_cycles(graph: &PantsGraph, allowed: &[bool]) -> CycleSet {
    let mut alive: Vec<bool> = allowed
        .iter()
        .enumerate()
        .map(|(e, &a)| a && graph.is_interior_edge(e))
        .collect();
    let mut core = two_core(graph, &alive);
    let mut heap = BinaryHeap::new();
    for r in (0..graph.vertex_count()).filter(|&v| core[v]) {
        if let Some(c) = shortest_cycle_through(graph, &alive, r, usize::MAX) {
            heap.push(Reverse((c.len(), r)));
        }
    }
    let mut cycles = Vec::new();
    while let Some(Reverse((len, r))) = heap.pop() {
        if !core[r] {
            continue;
        }
        let Some(c) = shortest_cycle_through(graph, &alive, r, usize::MAX) else {
            continue;
        };
        if c.len() != len {
            heap.push(Reverse((c.len(), r)));
            continue;
        }
        for &e in &c {
            alive[e] = false;
        }
        core = two_core(graph, &alive);
        cycles.push(c);
        if core[r] {
            if let Some(next) = shortest_cycle_through(graph, &alive, r, usize::MAX) {
                heap.push(Reverse((next.len(), r)));
            }
        }
    }
    CycleSet { cycles }
}

/// Greedy cycles over the whole interior graph.
pub fn find_disjoint_cycles(graph: &PantsGraph) -> crate::Result<CycleSet> {
    if graph.cycle_rank() == 0 {
        return Err(crate::Error::Domain("graph is a forest; no cycles".into()));
    }
    Ok(greedy_disjoint_cycles(graph, &vec![true; graph.edge_count()]))
}

/// Checks that `edges` forms one embedded cycle in `graph` and returns its
/// vertex sequence (one vertex per edge, the start of each edge in order).
pub fn cycle_vertices(graph: &PantsGraph, edges: &[EdgeId]) -> Option<Vec<VertexId>> {
    match edges.len() {
        0 => None,
        1 => {
            let (a, b) = graph.endpoints(edges[0]);
            (a == b).then(|| vec![a])
        }
        _ => {
            let (a0, b0) = graph.endpoints(edges[0]);
            for start in [a0, b0] {
                let mut seq = Vec::with_capacity(edges.len());
                let mut at = start;
                let mut ok = true;
                for &e in edges {
                    let (a, b) = graph.endpoints(e);
                    if a == b {
                        ok = false;
                        break;
                    }
                    seq.push(at);
                    at = if a == at {
                        b
                    } else if b == at {
                        a
                    } else {
                        ok = false;
                        break;
                    };
                }
                let mut distinct = seq.clone();
                distinct.sort_unstable();
                distinct.dedup();
                if ok && at == start && distinct.len() == seq.len() {
                    return Some(seq);
                }
            }
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::examples::*;

    #[test]
    fn dumbbell_gives_two_loops() {
        let cs = find_disjoint_cycles(&dumbbell()).unwrap();
        assert_eq!(cs.len(), 2);
        assert!(cs.cycles.iter().all(|c| c.len() == 1));
    }

    #[test]
    fn theta_gives_one_cycle() {
        let cs = find_disjoint_cycles(&theta()).unwrap();
        assert_eq!(cs.len(), 1);
        assert_eq!(cs.cycles[0].len(), 2);
    }

    #[test]
    fn forest_rejected() {
        assert!(find_disjoint_cycles(&linear_tree(7)).is_err());
    }

    #[test]
    fn extracted_cycles_are_embedded() {
        let g = treelike_chain(5);
        let cs = find_disjoint_cycles(&g).unwrap();
        assert_eq!(cs.len(), 5);
        assert!(cs.is_edge_disjoint());
        for c in &cs.cycles {
            assert!(cycle_vertices(&g, c).is_some());
        }
    }
}
