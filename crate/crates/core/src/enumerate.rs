//! Isomorphism classes of pants graphs in a stratum `(g, n)`.
//!
//! Every class arises from a smaller one: `(g, n)` from `(g, n - 1)` by
//! subdividing an edge and hanging a leaf on the new vertex, and `(g, 0)`
//! from `(g - 1, 2)` by joining the two leaves into one edge. The bases are
//! `(0, 3)` and `(1, 1)`.

use std::collections::BTreeMap;

use crate::canonical::{canonicalize, CanonicalKey};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::graph::{PantsGraph, VertexId};

pub const DEFAULT_CAP: usize = 20_000;
pub const CAP_ENV: &str = "PANTSLAB_CAP_CLASSES";

/// Class cap from the environment, falling back to [`DEFAULT_CAP`].
pub fn cap_from_env() -> usize {
    std::env::var(CAP_ENV)
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_CAP)
}

/// `2g - 2 + n > 0`.
pub fn is_stable(g: usize, n: usize) -> bool {
    2 * g + n > 2
}

/// Edge list as `(endpoint, endpoint)` pairs in edge order.
pub fn edge_list(graph: &PantsGraph) -> Vec<(VertexId, VertexId)> {
    (0..graph.edge_count()).map(|e| graph.endpoints(e)).collect()
}

/// Inserts a vertex on edge `e` and attaches a new leaf to it.
pub fn add_leaf_on_edge(graph: &PantsGraph, e: usize) -> PantsGraph {
    let mut edges = edge_list(graph);
    let (a, b) = edges[e];
    let v = graph.vertex_count();
    let leaf = v + 1;
    edges[e] = (a, v);
    edges.push((v, b));
    edges.push((v, leaf));
    PantsGraph::from_edges(v + 2, &edges).expect("subdivision keeps the graph valid")
}

/// Removes two leaves and joins their attachment points by an edge.
pub fn join_leaves(graph: &PantsGraph, l1: VertexId, l2: VertexId) -> PantsGraph {
    let mut ends = Vec::new();
    let mut edges = Vec::new();
    for (a, b) in edge_list(graph) {
        if a == l1 || a == l2 {
            ends.push(b);
        } else if b == l1 || b == l2 {
            ends.push(a);
        } else {
            edges.push((a, b));
        }
    }
    assert_eq!(ends.len(), 2, "join_leaves needs two leaves");
    edges.push((ends[0], ends[1]));
    let remap = |v: VertexId| v - usize::from(v > l1) - usize::from(v > l2);
    let edges: Vec<_> = edges.into_iter().map(|(a, b)| (remap(a), remap(b))).collect();
    PantsGraph::from_edges(graph.vertex_count() - 2, &edges).expect("joining leaves keeps the graph valid")
}

/// The base graph on one vertex: three leaves, or a loop and a leaf.
pub fn base(g: usize, n: usize) -> Option<PantsGraph> {
    match (g, n) {
        (0, 3) => Some(PantsGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap()),
        (1, 1) => Some(crate::graph::examples::punctured_torus()),
        _ => None,
    }
}

/// Representatives of every class in `(g, n)`, sorted by canonical key.
pub fn enumerate_classes(g: usize, n: usize, cap: usize, exec: Exec) -> Result<Vec<PantsGraph>> {
    Ok(enumerate_keyed(g, n, cap, exec)?.into_values().collect())
}

pub fn count_classes(g: usize, n: usize, cap: usize, exec: Exec) -> Result<usize> {
    Ok(enumerate_keyed(g, n, cap, exec)?.len())
}

pub fn enumerate_keyed(
    g: usize,
    n: usize,
    cap: usize,
    exec: Exec,
) -> Result<BTreeMap<CanonicalKey, PantsGraph>> {
    if !is_stable(g, n) {
        return Err(Error::Domain(format!("stratum ({g}, {n}) is not stable")));
    }
    if let Some(b) = base(g, n) {
        return Ok(BTreeMap::from([(canonicalize(&b), b)]));
    }
    let (parents, children): (BTreeMap<CanonicalKey, PantsGraph>, fn(&PantsGraph) -> Vec<PantsGraph>) =
        if n > 0 {
            (enumerate_keyed(g, n - 1, cap, exec)?, leaf_children)
        } else {
            (enumerate_keyed(g - 1, 2, cap, exec)?, closed_children)
        };
    let parents: Vec<PantsGraph> = parents.into_values().collect();
    let batches = exec.map(&parents, |p| {
        children(p)
            .into_iter()
            .map(|c| (canonicalize(&c), c))
            .collect::<Vec<_>>()
    });
    let mut out = BTreeMap::new();
    for (key, graph) in batches.into_iter().flatten() {
        out.entry(key).or_insert(graph);
        if out.len() > cap {
            return Err(Error::CapExceeded { cap });
        }
    }
    Ok(out)
}

fn leaf_children(p: &PantsGraph) -> Vec<PantsGraph> {
    (0..p.edge_count()).map(|e| add_leaf_on_edge(p, e)).collect()
}

fn closed_children(p: &PantsGraph) -> Vec<PantsGraph> {
    let leaves: Vec<VertexId> = (0..p.vertex_count()).filter(|&v| !p.is_interior(v)).collect();
    vec![join_leaves(p, leaves[0], leaves[1])]
}
