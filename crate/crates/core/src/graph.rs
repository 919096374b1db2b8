//! Half-edge multigraphs whose vertices have valence 1 (leaf ends) or 3
//! (pairs of pants).
//!
//! A [`PantsGraph`] is always valid: connected, every vertex of valence 1 or
//! 3, a fixed-point-free partner pairing, and at least one interior vertex.
//! Loops and parallel edges are first class. Raw, possibly invalid input is
//! carried by [`RawGraph`] and checked by [`validate`].

use std::collections::VecDeque;
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::cycles;
use crate::error::{Error, Result};

pub type VertexId = usize;
pub type HalfEdgeId = usize;
pub type EdgeId = usize;

/// Wire form of a graph: `{"vertices": K, "pairs": [[h1,h2],...], "owner": [...]}`.
///
/// Edge `i` is `pairs[i]`; `owner[h]` is the vertex carrying half-edge `h`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawGraph {
    pub vertices: usize,
    pub pairs: Vec<[HalfEdgeId; 2]>,
    pub owner: Vec<VertexId>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VertexKind {
    Interior,
    Leaf,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    EmptyGraph,
    OwnerLengthMismatch { half_edges: usize, owners: usize },
    HalfEdgeOutOfRange { half_edge: HalfEdgeId },
    HalfEdgeUnpaired { half_edge: HalfEdgeId },
    HalfEdgePairedTwice { half_edge: HalfEdgeId },
    SelfPaired { half_edge: HalfEdgeId },
    OwnerOutOfRange { half_edge: HalfEdgeId, vertex: VertexId },
    BadValence { vertex: VertexId, valence: usize },
    LeafToLeafEdge { edge: EdgeId },
    NoInteriorVertex,
    Disconnected { components: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyGraph => write!(f, "graph has no vertices"),
            Violation::OwnerLengthMismatch { half_edges, owners } => write!(
                f,
                "{half_edges} half-edges in pairs but {owners} owner entries"
            ),
            Violation::HalfEdgeOutOfRange { half_edge } => {
                write!(f, "half-edge {half_edge} out of range")
            }
            Violation::HalfEdgeUnpaired { half_edge } => {
                write!(f, "half-edge {half_edge} is not in any pair")
            }
            Violation::HalfEdgePairedTwice { half_edge } => {
                write!(f, "half-edge {half_edge} appears in more than one pair")
            }
            Violation::SelfPaired { half_edge } => {
                write!(f, "half-edge {half_edge} is paired with itself")
            }
            Violation::OwnerOutOfRange { half_edge, vertex } => {
                write!(f, "half-edge {half_edge} owned by missing vertex {vertex}")
            }
            Violation::BadValence { vertex, valence } => {
                write!(f, "vertex {vertex} has valence {valence}, expected 1 or 3")
            }
            Violation::LeafToLeafEdge { edge } => write!(f, "edge {edge} joins two leaf ends"),
            Violation::NoInteriorVertex => write!(f, "graph has no interior vertex"),
            Violation::Disconnected { components } => {
                write!(f, "graph has {components} connected components")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Lists every violated structural invariant of `raw`.
pub fn validate(raw: &RawGraph) -> ValidationReport {
    let mut violations = Vec::new();
    let half_edges = raw.pairs.len() * 2;
    if raw.vertices == 0 {
        violations.push(Violation::EmptyGraph);
    }
    if raw.owner.len() != half_edges {
        violations.push(Violation::OwnerLengthMismatch {
            half_edges,
            owners: raw.owner.len(),
        });
    }
    let total = half_edges.max(raw.owner.len());
    let mut seen = vec![0usize; total];
    for pair in &raw.pairs {
        if pair[0] == pair[1] {
            violations.push(Violation::SelfPaired { half_edge: pair[0] });
        }
        for &h in pair {
            if h >= total {
                violations.push(Violation::HalfEdgeOutOfRange { half_edge: h });
            } else {
                seen[h] += 1;
            }
        }
    }
    for (h, &count) in seen.iter().enumerate() {
        match count {
            0 => violations.push(Violation::HalfEdgeUnpaired { half_edge: h }),
            1 => {}
            _ => violations.push(Violation::HalfEdgePairedTwice { half_edge: h }),
        }
    }
    let mut valence = vec![0usize; raw.vertices];
    for (h, &v) in raw.owner.iter().enumerate() {
        if v >= raw.vertices {
            violations.push(Violation::OwnerOutOfRange { half_edge: h, vertex: v });
        } else {
            valence[v] += 1;
        }
    }
    for (v, &d) in valence.iter().enumerate() {
        if d != 1 && d != 3 {
            violations.push(Violation::BadValence { vertex: v, valence: d });
        }
    }
    if !violations.is_empty() {
        return ValidationReport { violations };
    }

    for (e, pair) in raw.pairs.iter().enumerate() {
        if valence[raw.owner[pair[0]]] == 1 && valence[raw.owner[pair[1]]] == 1 {
            violations.push(Violation::LeafToLeafEdge { edge: e });
        }
    }
    if !valence.contains(&3) {
        violations.push(Violation::NoInteriorVertex);
    }
    let components = count_components(raw.vertices, raw.pairs.iter().map(|p| {
        (raw.owner[p[0]], raw.owner[p[1]])
    }));
    if components > 1 {
        violations.push(Violation::Disconnected { components });
    }
    ValidationReport { violations }
}

fn count_components(n: usize, edges: impl Iterator<Item = (usize, usize)>) -> usize {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut components = n;
    for (a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
            components -= 1;
        }
    }
    components
}

/// Length of a shortest cycle of the interior graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Girth {
    Finite(usize),
    /// The interior graph is a forest.
    Infinite,
}

impl Serialize for Girth {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Girth::Finite(k) => s.serialize_u64(*k as u64),
            Girth::Infinite => s.serialize_str("inf"),
        }
    }
}

impl fmt::Display for Girth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Girth::Finite(k) => write!(f, "{k}"),
            Girth::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphMetrics {
    pub genus: usize,
    pub punctures: usize,
    pub girth: Girth,
    pub cycle_rank: usize,
    pub leaf_count: usize,
    pub interior_vertices: usize,
    pub interior_edges: usize,
}

/// An immutable, validated pants-decomposition graph.
#[derive(Clone, PartialEq, Eq)]
pub struct PantsGraph {
    owner: Vec<VertexId>,
    pairs: Vec<[HalfEdgeId; 2]>,
    partner: Vec<HalfEdgeId>,
    edge_of: Vec<EdgeId>,
    incident: Vec<SmallVec<[HalfEdgeId; 3]>>,
}

impl fmt::Debug for PantsGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PantsGraph")
            .field("vertices", &self.vertex_count())
            .field("pairs", &self.pairs)
            .field("owner", &self.owner)
            .finish()
    }
}

impl TryFrom<RawGraph> for PantsGraph {
    type Error = Error;

    fn try_from(raw: RawGraph) -> Result<Self> {
        let report = validate(&raw);
        if !report.is_valid() {
            return Err(Error::InvalidGraph(report));
        }
        Ok(Self::from_parts_unchecked(raw.vertices, raw.pairs, raw.owner))
    }
}

impl PantsGraph {
    pub(crate) fn from_parts_unchecked(
        vertices: usize,
        pairs: Vec<[HalfEdgeId; 2]>,
        owner: Vec<VertexId>,
    ) -> Self {
        let mut partner = vec![0; owner.len()];
        let mut edge_of = vec![0; owner.len()];
        for (e, &[a, b]) in pairs.iter().enumerate() {
            partner[a] = b;
            partner[b] = a;
            edge_of[a] = e;
            edge_of[b] = e;
        }
        let mut incident = vec![SmallVec::new(); vertices];
        for (h, &v) in owner.iter().enumerate() {
            incident[v].push(h);
        }
        PantsGraph {
            owner,
            pairs,
            partner,
            edge_of,
            incident,
        }
    }

    /// Builds a graph from vertex-pair edge lists; vertex valence determines
    /// leaf versus interior. Half-edge `2i` sits at `edges[i].0`.
    pub fn from_edges(vertices: usize, edges: &[(VertexId, VertexId)]) -> Result<Self> {
        let pairs = (0..edges.len()).map(|i| [2 * i, 2 * i + 1]).collect();
        let owner = edges.iter().flat_map(|&(a, b)| [a, b]).collect();
        PantsGraph::try_from(RawGraph {
            vertices,
            pairs,
            owner,
        })
    }

    pub fn to_raw(&self) -> RawGraph {
        RawGraph {
            vertices: self.vertex_count(),
            pairs: self.pairs.clone(),
            owner: self.owner.clone(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawGraph = serde_json::from_str(text)?;
        PantsGraph::try_from(raw)
    }

    /// Compact JSON with keys in the order `vertices`, `pairs`, `owner`.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_raw()).expect("graph serialization is infallible")
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph pants {\n");
        for v in 0..self.vertex_count() {
            let shape = match self.kind(v) {
                VertexKind::Interior => "circle",
                VertexKind::Leaf => "point",
            };
            let _ = writeln!(out, "  v{v} [shape={shape}];");
        }
        for (e, &[a, b]) in self.pairs.iter().enumerate() {
            let _ = writeln!(
                out,
                "  v{} -- v{} [label=\"e{e}\"];",
                self.owner[a], self.owner[b]
            );
        }
        out.push_str("}\n");
        out
    }

    pub fn vertex_count(&self) -> usize {
        self.incident.len()
    }

    pub fn half_edge_count(&self) -> usize {
        self.owner.len()
    }

    pub fn edge_count(&self) -> usize {
        self.pairs.len()
    }

    pub fn owner(&self, h: HalfEdgeId) -> VertexId {
        self.owner[h]
    }

    pub fn owners(&self) -> &[VertexId] {
        &self.owner
    }

    pub fn partner(&self, h: HalfEdgeId) -> HalfEdgeId {
        self.partner[h]
    }

    pub fn edge_of(&self, h: HalfEdgeId) -> EdgeId {
        self.edge_of[h]
    }

    pub fn pairs(&self) -> &[[HalfEdgeId; 2]] {
        &self.pairs
    }

    pub fn edge(&self, e: EdgeId) -> [HalfEdgeId; 2] {
        self.pairs[e]
    }

    pub fn endpoints(&self, e: EdgeId) -> (VertexId, VertexId) {
        let [a, b] = self.pairs[e];
        (self.owner[a], self.owner[b])
    }

    pub fn incident(&self, v: VertexId) -> &[HalfEdgeId] {
        &self.incident[v]
    }

    /// Vertex at the far end of half-edge `h`.
    pub fn across(&self, h: HalfEdgeId) -> VertexId {
        self.owner[self.partner[h]]
    }

    pub fn kind(&self, v: VertexId) -> VertexKind {
        if self.incident[v].len() == 1 {
            VertexKind::Leaf
        } else {
            VertexKind::Interior
        }
    }

    pub fn is_interior(&self, v: VertexId) -> bool {
        self.kind(v) == VertexKind::Interior
    }

    pub fn is_loop(&self, e: EdgeId) -> bool {
        let (a, b) = self.endpoints(e);
        a == b
    }

    /// True when both ends of `e` are interior vertices.
    pub fn is_interior_edge(&self, e: EdgeId) -> bool {
        let (a, b) = self.endpoints(e);
        self.is_interior(a) && self.is_interior(b)
    }

    pub fn interior_vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.vertex_count()).filter(move |&v| self.is_interior(v))
    }

    pub fn interior_edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.edge_count()).filter(move |&e| self.is_interior_edge(e))
    }

    pub fn leaf_count(&self) -> usize {
        self.incident.iter().filter(|inc| inc.len() == 1).count()
    }

    pub fn interior_count(&self) -> usize {
        self.vertex_count() - self.leaf_count()
    }

    pub fn punctures(&self) -> usize {
        self.leaf_count()
    }

    /// Genus from the vertex count identity `V_int = 2g - 2 + n`.
    pub fn genus(&self) -> usize {
        (self.interior_count() + 2 - self.punctures()) / 2
    }

    /// Number of leaves attached to interior vertex `v`.
    pub fn leaves_at(&self, v: VertexId) -> usize {
        self.incident[v]
            .iter()
            .filter(|&&h| !self.is_interior(self.across(h)))
            .count()
    }

    /// Number of loops at `v`.
    pub fn loops_at(&self, v: VertexId) -> usize {
        self.incident[v]
            .iter()
            .filter(|&&h| self.across(h) == v)
            .count()
            / 2
    }

    pub fn loop_count(&self) -> usize {
        (0..self.edge_count()).filter(|&e| self.is_loop(e)).count()
    }

    pub fn interior_edge_count(&self) -> usize {
        self.interior_edges().count()
    }

    /// Cycle rank of the interior graph, counted by a spanning forest.
    pub fn cycle_rank(&self) -> usize {
        let interior: Vec<VertexId> = self.interior_vertices().collect();
        let mut index = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in interior.iter().enumerate() {
            index[v] = i;
        }
        let edges: Vec<(usize, usize)> = self
            .interior_edges()
            .map(|e| {
                let (a, b) = self.endpoints(e);
                (index[a], index[b])
            })
            .collect();
        let components = count_components(interior.len(), edges.iter().copied());
        edges.len() + components - interior.len()
    }

    /// Treelike: every cycle of the interior graph is a loop.
    pub fn is_treelike(&self) -> bool {
        self.cycle_rank() == self.loop_count()
    }

    pub fn girth(&self) -> Girth {
        match cycles::shortest_cycle(self, &vec![true; self.edge_count()]) {
            Some(c) => Girth::Finite(c.len()),
            None => Girth::Infinite,
        }
    }

    pub fn metrics(&self) -> GraphMetrics {
        GraphMetrics {
            genus: self.genus(),
            punctures: self.punctures(),
            girth: self.girth(),
            cycle_rank: self.cycle_rank(),
            leaf_count: self.leaf_count(),
            interior_vertices: self.interior_count(),
            interior_edges: self.interior_edge_count(),
        }
    }

    /// Moore-bound form of the systole estimate:
    /// `girth <= 2 log2(2g/3) + 2` for closed graphs of genus at least 2.
    pub fn girth_moore_check(&self) -> Result<bool> {
        if self.punctures() > 0 {
            return Err(Error::Domain(
                "girth Moore check applies to graphs without leaves".into(),
            ));
        }
        let g = self.genus();
        if g < 2 {
            return Err(Error::Domain(format!("genus {g} < 2")));
        }
        let bound = moore_girth_bound(g);
        Ok(match self.girth() {
            Girth::Finite(k) => (k as f64) <= bound,
            Girth::Infinite => false,
        })
    }

    /// Tree diameter in edges, counting leaf edges. `None` unless genus is 0.
    pub fn tree_diameter(&self) -> Option<usize> {
        if self.genus() != 0 {
            return None;
        }
        let (far, _) = self.bfs_farthest(0);
        let (_, d) = self.bfs_farthest(far);
        Some(d)
    }

    fn bfs_farthest(&self, start: VertexId) -> (VertexId, usize) {
        let mut dist = vec![usize::MAX; self.vertex_count()];
        dist[start] = 0;
        let mut queue = VecDeque::from([start]);
        let mut best = (start, 0);
        while let Some(v) = queue.pop_front() {
            if dist[v] > best.1 {
                best = (v, dist[v]);
            }
            for &h in self.incident(v) {
                let w = self.across(h);
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        best
    }

    /// The three half-edges at `v` other than `h`, when `v` is interior.
    pub(crate) fn others_at(&self, h: HalfEdgeId) -> [HalfEdgeId; 2] {
        let v = self.owner[h];
        let mut out = [usize::MAX; 2];
        let mut i = 0;
        for &x in self.incident(v) {
            if x != h {
                out[i] = x;
                i += 1;
            }
        }
        debug_assert_eq!(i, 2);
        out
    }

    /// Moves half-edge `a` to `owner(b)` and `b` to `owner(a)`.
    pub(crate) fn exchange(&mut self, a: HalfEdgeId, b: HalfEdgeId) {
        let (va, vb) = (self.owner[a], self.owner[b]);
        if va == vb {
            return;
        }
        self.owner[a] = vb;
        self.owner[b] = va;
        for h in self.incident[va].iter_mut() {
            if *h == a {
                *h = b;
            }
        }
        for h in self.incident[vb].iter_mut() {
            if *h == b {
                *h = a;
            }
        }
        self.incident[va].sort_unstable();
        self.incident[vb].sort_unstable();
    }

    /// Applies a vertex permutation and a half-edge permutation
    /// (`new id = map[old id]`), keeping the pair list in edge order.
    pub fn relabel(&self, vertex_map: &[VertexId], half_edge_map: &[HalfEdgeId]) -> PantsGraph {
        let mut owner = vec![0; self.half_edge_count()];
        for (h, &v) in self.owner.iter().enumerate() {
            owner[half_edge_map[h]] = vertex_map[v];
        }
        let pairs = self
            .pairs
            .iter()
            .map(|&[a, b]| [half_edge_map[a], half_edge_map[b]])
            .collect();
        PantsGraph::from_parts_unchecked(self.vertex_count(), pairs, owner)
    }
}

/// `2 log2(2g/3) + 2`.
pub fn moore_girth_bound(genus: usize) -> f64 {
    2.0 * (2.0 * genus as f64 / 3.0).log2() + 2.0
}

/// Named small graphs used throughout tests and docs.
pub mod examples {
    use super::*;

    /// Two vertices joined by three parallel edges (genus 2).
    pub fn theta() -> PantsGraph {
        PantsGraph::from_edges(2, &[(0, 1), (0, 1), (0, 1)]).unwrap()
    }

    /// Two loops joined by a bridge (genus 2).
    pub fn dumbbell() -> PantsGraph {
        PantsGraph::from_edges(2, &[(0, 0), (0, 1), (1, 1)]).unwrap()
    }

    /// One vertex with a loop and a leaf: the once-punctured torus.
    pub fn punctured_torus() -> PantsGraph {
        PantsGraph::from_edges(2, &[(0, 0), (0, 1)]).unwrap()
    }

    /// The caterpillar tree with `n >= 3` leaves.
    pub fn linear_tree(n: usize) -> PantsGraph {
        assert!(n >= 3);
        let interior = n - 2;
        let mut edges = Vec::new();
        for i in 0..interior.saturating_sub(1) {
            edges.push((i, i + 1));
        }
        let mut leaf = interior;
        for i in 0..interior {
            let count = if interior == 1 {
                3
            } else if i == 0 || i == interior - 1 {
                2
            } else {
                1
            };
            for _ in 0..count {
                edges.push((i, leaf));
                leaf += 1;
            }
        }
        PantsGraph::from_edges(interior + n, &edges).unwrap()
    }

    /// A center joined to three vertices carrying two leaves each (n = 6).
    pub fn claw6() -> PantsGraph {
        PantsGraph::from_edges(
            10,
            &[
                (0, 1),
                (0, 2),
                (0, 3),
                (1, 4),
                (1, 5),
                (2, 6),
                (2, 7),
                (3, 8),
                (3, 9),
            ],
        )
        .unwrap()
    }

    /// Treelike closed graph: a path of `g - 2` vertices with `g` loop vertices.
    pub fn treelike_chain(g: usize) -> PantsGraph {
        assert!(g >= 2);
        if g == 2 {
            return dumbbell();
        }
        let spine = g - 2;
        let mut edges = Vec::new();
        for i in 0..spine - 1 {
            edges.push((i, i + 1));
        }
        let mut next = spine;
        for i in 0..spine {
            let count = if spine == 1 {
                3
            } else if i == 0 || i == spine - 1 {
                2
            } else {
                1
            };
            for _ in 0..count {
                edges.push((i, next));
                edges.push((next, next));
                next += 1;
            }
        }
        PantsGraph::from_edges(next, &edges).unwrap()
    }
}
