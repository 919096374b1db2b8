//! Seeded random trees, cubic graphs and treelike graphs.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{PantsGraph, VertexId};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn grow_tree<R: Rng>(n: usize, rng: &mut R) -> (usize, Vec<(VertexId, VertexId)>) {
    assert!(n >= 3, "a tree needs at least three leaves");
    let mut edges = vec![(0, 1), (0, 2), (0, 3)];
    let mut vertices = 4;
    for _ in 3..n {
        let e = rng.gen_range(0..edges.len());
        let (a, b) = edges[e];
        let (v, leaf) = (vertices, vertices + 1);
        vertices += 2;
        edges[e] = (a, v);
        edges.push((v, b));
        edges.push((v, leaf));
    }
    (vertices, edges)
}

/// A tree with `n` leaves grown by inserting each new leaf on a uniformly
/// chosen edge.
pub fn random_tree<R: Rng>(n: usize, rng: &mut R) -> PantsGraph {
    let (vertices, edges) = grow_tree(n, rng);
    PantsGraph::from_edges(vertices, &edges).expect("grown trees are valid")
}

/// A connected closed cubic multigraph of genus `g >= 2` from the
/// configuration model (loops and parallel edges allowed), resampled until
/// connected.
pub fn random_cubic<R: Rng>(g: usize, rng: &mut R) -> PantsGraph {
    assert!(g >= 2, "closed cubic graphs need genus at least 2");
    let v = 2 * g - 2;
    let mut points: Vec<VertexId> = (0..3 * v).map(|p| p / 3).collect();
    loop {
        points.shuffle(rng);
        let edges: Vec<(VertexId, VertexId)> = points.chunks_exact(2).map(|c| (c[0], c[1])).collect();
        if let Ok(graph) = PantsGraph::from_edges(v, &edges) {
            return graph;
        }
    }
}

/// A treelike graph: a random tree on `g + n` leaves with `g` of them,
/// chosen at random, turned into loop vertices.
pub fn random_treelike<R: Rng>(g: usize, n: usize, rng: &mut R) -> PantsGraph {
    match (g, n) {
        (2, 0) => return crate::graph::examples::dumbbell(),
        (1, 1) => return crate::graph::examples::punctured_torus(),
        _ => assert!(g + n >= 3, "({g}, {n}) is not stable"),
    }
    let (vertices, mut edges) = grow_tree(g + n, rng);
    let mut leaves: Vec<VertexId> = {
        let mut deg = vec![0; vertices];
        for &(a, b) in &edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        (0..vertices).filter(|&x| deg[x] == 1).collect()
    };
    leaves.shuffle(rng);
    for &l in &leaves[..g] {
        edges.push((l, l));
    }
    PantsGraph::from_edges(vertices, &edges).expect("treelike construction is valid")
}
