//! Isomorphism-invariant keys for pants graphs.
//!
//! Leaves and loops are folded into per-vertex labels, pendant trees of the
//! interior multigraph are stripped into nested labels, and whatever remains
//! (the 2-core, or the one or two centre vertices of a tree) gets a
//! certificate from colour refinement with individualization, minimised over
//! all branches. Two graphs are isomorphic exactly when their keys agree.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::graph::{PantsGraph, VertexId};

const KEY_VERSION: &str = "pk1";

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CanonicalKey(String);

impl CanonicalKey {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub fn is_isomorphic(a: &PantsGraph, b: &PantsGraph) -> bool {
    a.vertex_count() == b.vertex_count()
        && a.edge_count() == b.edge_count()
        && canonicalize(a) == canonicalize(b)
}

pub fn canonicalize(graph: &PantsGraph) -> CanonicalKey {
    let interior: Vec<VertexId> = graph.interior_vertices().collect();
    let mut index = vec![usize::MAX; graph.vertex_count()];
    for (i, &v) in interior.iter().enumerate() {
        index[v] = i;
    }
    let m = interior.len();
    // adjacency with multiplicity among interior vertices, loops excluded
    let mut adj: Vec<BTreeMap<usize, u32>> = vec![BTreeMap::new(); m];
    for e in graph.interior_edges() {
        let (a, b) = graph.endpoints(e);
        if a != b {
            *adj[index[a]].entry(index[b]).or_default() += 1;
            *adj[index[b]].entry(index[a]).or_default() += 1;
        }
    }
    let base: Vec<String> = interior
        .iter()
        .map(|&v| format!("{}.{}", graph.leaves_at(v), graph.loops_at(v)))
        .collect();

    let (core, labels) = strip_pendant_trees(&adj, base);
    let mut core_index = vec![usize::MAX; m];
    for (i, &v) in core.iter().enumerate() {
        core_index[v] = i;
    }
    let mut distinct: Vec<&String> = core.iter().map(|&v| &labels[v]).collect();
    distinct.sort();
    distinct.dedup();
    let rank_of = |s: &String| distinct.binary_search(&s).unwrap() as u32;
    let colours: Vec<u32> = core.iter().map(|&v| rank_of(&labels[v])).collect();
    let core_adj: Vec<Vec<(usize, u32)>> = core
        .iter()
        .map(|&v| {
            adj[v]
                .iter()
                .filter(|(w, _)| core_index[**w] != usize::MAX)
                .map(|(w, &k)| (core_index[*w], k))
                .collect()
        })
        .collect();
    let cert = certificate(&core_adj, colours);

    let mut key = String::from(KEY_VERSION);
    key.push('|');
    for (i, s) in distinct.iter().enumerate() {
        if i > 0 {
            key.push(',');
        }
        key.push_str(s);
    }
    key.push('|');
    for (i, c) in cert.iter().enumerate() {
        if i > 0 {
            key.push(' ');
        }
        key.push_str(&c.to_string());
    }
    CanonicalKey(key)
}

/// Removes degree-one vertices in layered rounds, folding each removed
/// subtree into its parent's label. Stops at the 2-core or, for trees, at
/// the one or two centre vertices.
fn strip_pendant_trees(
    adj: &[BTreeMap<usize, u32>],
    base: Vec<String>,
) -> (Vec<usize>, Vec<String>) {
    let m = adj.len();
    let mut degree: Vec<u32> = adj.iter().map(|a| a.values().sum()).collect();
    let mut alive = vec![true; m];
    let mut remaining = m;
    let mut children: Vec<Vec<String>> = vec![Vec::new(); m];
    let mut labels = base.clone();
    loop {
        if remaining <= 2 {
            break;
        }
        let layer: Vec<usize> = (0..m).filter(|&v| alive[v] && degree[v] <= 1).collect();
        if layer.is_empty() {
            break;
        }
        for &v in &layer {
            let mut kids = std::mem::take(&mut children[v]);
            kids.sort();
            labels[v] = format!("({}{})", base[v], kids.concat());
        }
        for &v in &layer {
            alive[v] = false;
            remaining -= 1;
        }
        for &v in &layer {
            for (&w, &k) in &adj[v] {
                if alive[w] {
                    degree[w] -= k;
                    children[w].push(labels[v].clone());
                }
            }
        }
    }
    let core: Vec<usize> = (0..m).filter(|&v| alive[v]).collect();
    for &v in &core {
        let mut kids = std::mem::take(&mut children[v]);
        kids.sort();
        labels[v] = format!("{}[{}]", base[v], kids.concat());
    }
    (core, labels)
}

/// Equitable refinement: repeatedly splits colour classes by the multiset of
/// (neighbour colour, multiplicity). Colours stay ranks in a canonical order.
fn refine(adj: &[Vec<(usize, u32)>], mut colours: Vec<u32>) -> Vec<u32> {
    let n = colours.len();
    let mut classes = count_classes(&colours);
    loop {
        let sigs: Vec<(u32, Vec<(u32, u32)>)> = (0..n)
            .map(|v| {
                let mut s: Vec<(u32, u32)> =
                    adj[v].iter().map(|&(w, k)| (colours[w], k)).collect();
                s.sort_unstable();
                (colours[v], s)
            })
            .collect();
        let mut sorted: Vec<&(u32, Vec<(u32, u32)>)> = sigs.iter().collect();
        sorted.sort();
        sorted.dedup();
        colours = sigs
            .iter()
            .map(|s| sorted.binary_search(&s).unwrap() as u32)
            .collect();
        let now = sorted.len();
        if now == classes {
            return colours;
        }
        classes = now;
    }
}

fn count_classes(colours: &[u32]) -> usize {
    let mut c = colours.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

/// Minimum leaf certificate over the individualization-refinement tree.
fn certificate(adj: &[Vec<(usize, u32)>], colours: Vec<u32>) -> Vec<u32> {
    let refined = refine(adj, colours.clone());
    let mut best: Option<Vec<u32>> = None;
    search(adj, &colours, refined, &mut best);
    best.unwrap_or_default()
}

fn search(adj: &[Vec<(usize, u32)>], original: &[u32], colours: Vec<u32>, best: &mut Option<Vec<u32>>) {
    let n = colours.len();
    let mut size = vec![0usize; n];
    for &c in &colours {
        size[c as usize] += 1;
    }
    // first smallest non-singleton cell
    let target = (0..n)
        .filter(|&c| size[c] > 1)
        .min_by_key(|&c| (size[c], c));
    let Some(target) = target else {
        let cert = leaf_certificate(adj, original, &colours);
        if best.as_ref().is_none_or(|b| cert < *b) {
            *best = Some(cert);
        }
        return;
    };
    for v in (0..n).filter(|&v| colours[v] as usize == target) {
        let split: Vec<u32> = (0..n)
            .map(|w| 2 * colours[w] + u32::from(w != v))
            .collect();
        let next = refine(adj, split);
        search(adj, original, next, best);
    }
}

fn leaf_certificate(adj: &[Vec<(usize, u32)>], original: &[u32], order: &[u32]) -> Vec<u32> {
    let n = order.len();
    let mut at = vec![0usize; n];
    for v in 0..n {
        at[order[v] as usize] = v;
    }
    let mut cert = Vec::with_capacity(n + n * n);
    cert.push(n as u32);
    cert.extend(at.iter().map(|&v| original[v]));
    let mut row = vec![0u32; n];
    for &v in &at {
        row.iter_mut().for_each(|x| *x = 0);
        for &(w, k) in &adj[v] {
            row[order[w] as usize] = k;
        }
        cert.extend_from_slice(&row);
    }
    cert
}

/// Exposes canonical keys of a batch of graphs, grouped by class.
pub fn group_by_class(graphs: &[PantsGraph]) -> BTreeMap<CanonicalKey, Vec<usize>> {
    let mut out: BTreeMap<CanonicalKey, Vec<usize>> = BTreeMap::new();
    for (i, g) in graphs.iter().enumerate() {
        out.entry(canonicalize(g)).or_default().push(i);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::examples::*;

    fn shuffled(g: &PantsGraph, seed: u64) -> PantsGraph {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut vmap: Vec<usize> = (0..g.vertex_count()).collect();
        vmap.shuffle(&mut rng);
        let mut hmap: Vec<usize> = (0..g.half_edge_count()).collect();
        hmap.shuffle(&mut rng);
        g.relabel(&vmap, &hmap)
    }

    #[test]
    fn relabeling_preserves_key() {
        for g in [theta(), dumbbell(), claw6(), linear_tree(9), treelike_chain(6)] {
            let k = canonicalize(&g);
            for seed in 0..5 {
                assert_eq!(canonicalize(&shuffled(&g, seed)), k);
            }
        }
    }

    #[test]
    fn distinguishes_small_classes() {
        assert_ne!(canonicalize(&theta()), canonicalize(&dumbbell()));
        assert_ne!(canonicalize(&claw6()), canonicalize(&linear_tree(6)));
        assert!(!is_isomorphic(&linear_tree(5), &linear_tree(6)));
    }

    #[test]
    fn k33_versus_prism() {
        let k33 = PantsGraph::from_edges(
            6,
            &[(0, 3), (0, 4), (0, 5), (1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5)],
        )
        .unwrap();
        let prism = PantsGraph::from_edges(
            6,
            &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3), (1, 4), (2, 5)],
        )
        .unwrap();
        assert_ne!(canonicalize(&k33), canonicalize(&prism));
        assert_eq!(canonicalize(&k33), canonicalize(&shuffled(&k33, 11)));
    }
}
