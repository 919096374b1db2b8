//! Exact distances and diameters in the pants graph and the cubical pants
//! graph, on labeled graphs or on isomorphism classes.
//!
//! Cubical edges are simultaneous batches: every nonempty set of movable
//! edges forming a matching (or, in edge mode, any set of distinct edges),
//! with one of the two move variants per edge, weighted `sqrt(k)`.

use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, HashMap};

use serde::Serialize;

use crate::canonical::{canonicalize, CanonicalKey};
use crate::enumerate::enumerate_keyed;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::graph::{EdgeId, PantsGraph};
use crate::moves::{move_variants, Disjointness, Move, MoveBatch, MoveSchedule};

/// Two path costs closer than this are treated as equal.
pub const COST_TOL: f64 = 1e-9;
pub const DEFAULT_MATCHING_CAP: usize = 1 << 20;
pub const DEFAULT_NODE_CAP: usize = 200_000;
pub const DEFAULT_RADIUS: f64 = 8.0;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    /// Unit-length single moves.
    Pants,
    /// Batches of `k` disjoint moves at length `sqrt(k)`.
    #[default]
    Cubical,
}

impl std::str::FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pants" => Ok(Metric::Pants),
            "cubical" => Ok(Metric::Cubical),
            other => Err(Error::Domain(format!("unknown metric `{other}`"))),
        }
    }
}

impl std::fmt::Display for Metric {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Metric::Pants => "pants",
            Metric::Cubical => "cubical",
        })
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct OracleConfig {
    pub metric: Metric,
    pub disjoint: Disjointness,
    /// Batches generated per node before the expansion is cut short.
    pub matching_cap: usize,
    /// Nodes settled before a search gives up.
    pub node_cap: usize,
    /// Labeled searches stop beyond this distance.
    pub max_radius: f64,
    #[serde(skip)]
    pub exec: Exec,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            metric: Metric::Cubical,
            disjoint: Disjointness::Vertex,
            matching_cap: DEFAULT_MATCHING_CAP,
            node_cap: DEFAULT_NODE_CAP,
            max_radius: DEFAULT_RADIUS,
            exec: Exec::Parallel,
        }
    }
}

impl OracleConfig {
    pub fn with_metric(metric: Metric) -> Self {
        OracleConfig {
            metric,
            ..Self::default()
        }
    }
}

/// One outgoing edge of a node.
#[derive(Clone, Debug)]
pub struct Step {
    pub batch: MoveBatch,
    pub result: PantsGraph,
    pub weight: f64,
}

/// Outgoing edges of `graph`; the flag reports a cut-short expansion.
pub fn steps(graph: &PantsGraph, cfg: &OracleConfig) -> (Vec<Step>, bool) {
    let movable: Vec<EdgeId> = (0..graph.edge_count())
        .filter(|&e| graph.is_interior_edge(e) && !graph.is_loop(e))
        .collect();
    let mut out = Vec::new();
    if cfg.metric == Metric::Pants {
        for &e in &movable {
            for mv in move_variants(graph, e).into_iter().flatten() {
                out.push(Step {
                    batch: MoveBatch::new(vec![mv]),
                    result: mv.apply(graph).expect("variant is well formed"),
                    weight: 1.0,
                });
            }
        }
        return (out, false);
    }
    let mut used = vec![false; graph.vertex_count()];
    let mut chosen = Vec::new();
    let mut truncated = false;
    grow_batches(
        graph,
        graph,
        &movable,
        0,
        cfg,
        &mut used,
        &mut chosen,
        &mut out,
        &mut truncated,
    );
    (out, truncated)
}

#[allow(clippy::too_many_arguments)]
fn grow_batches(
    original: &PantsGraph,
    current: &PantsGraph,
    movable: &[EdgeId],
    from: usize,
    cfg: &OracleConfig,
    used: &mut Vec<bool>,
    chosen: &mut Vec<Move>,
    out: &mut Vec<Step>,
    truncated: &mut bool,
) {
    for i in from..movable.len() {
        if out.len() >= cfg.matching_cap {
            *truncated = true;
            return;
        }
        let e = movable[i];
        let variants = match cfg.disjoint {
            Disjointness::Vertex => {
                let (u, v) = original.endpoints(e);
                if used[u] || used[v] {
                    continue;
                }
                move_variants(original, e)
            }
            Disjointness::Edge => move_variants(current, e),
        };
        let Some(variants) = variants else { continue };
        let (u, v) = original.endpoints(e);
        if cfg.disjoint == Disjointness::Vertex {
            used[u] = true;
            used[v] = true;
        }
        for mv in variants {
            let mut next = current.clone();
            next.exchange(mv.swap[0], mv.swap[1]);
            chosen.push(mv);
            out.push(Step {
                batch: MoveBatch::new(chosen.clone()),
                result: next.clone(),
                weight: (chosen.len() as f64).sqrt(),
            });
            grow_batches(original, &next, movable, i + 1, cfg, used, chosen, out, truncated);
            chosen.pop();
        }
        if cfg.disjoint == Disjointness::Vertex {
            used[u] = false;
            used[v] = false;
        }
    }
}

/// Node identity for labeled searches: the partition of half-edges into
/// vertices, independent of vertex names.
fn labeled_key(graph: &PantsGraph) -> String {
    let mut rename = vec![usize::MAX; graph.vertex_count()];
    let mut next = 0;
    let mut key = String::with_capacity(graph.half_edge_count() * 3);
    for &v in graph.owners() {
        if rename[v] == usize::MAX {
            rename[v] = next;
            next += 1;
        }
        key.push_str(&rename[v].to_string());
        key.push(',');
    }
    key
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct Cost(f64);

impl Eq for Cost {}

impl PartialOrd for Cost {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Cost {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DistanceResult {
    pub distance: f64,
    #[serde(skip)]
    pub witness: MoveSchedule,
    pub witness_batches: Vec<usize>,
    pub settled_nodes: usize,
    pub explored_edges: usize,
    /// Some node had more batches than the matching cap allowed.
    pub truncated: bool,
}

struct Node {
    dist: f64,
    rep: PantsGraph,
    pred: Option<(usize, MoveBatch)>,
    done: bool,
}

/// Exact distance with a geodesic witness. In quotient mode the endpoints
/// are isomorphism classes; otherwise labeled graphs sharing a half-edge
/// pairing, searched within `cfg.max_radius`.
pub fn distance(
    source: &PantsGraph,
    target: &PantsGraph,
    quotient: bool,
    cfg: &OracleConfig,
) -> Result<DistanceResult> {
    if source.genus() != target.genus() || source.punctures() != target.punctures() {
        return Err(Error::Mismatch(format!(
            "({}, {}) versus ({}, {})",
            source.genus(),
            source.punctures(),
            target.genus(),
            target.punctures()
        )));
    }
    if !quotient && source.pairs() != target.pairs() {
        return Err(Error::Mismatch(
            "labeled distance needs identical half-edge pairings".into(),
        ));
    }
    let key_of = |g: &PantsGraph| {
        if quotient {
            canonicalize(g).to_string()
        } else {
            labeled_key(g)
        }
    };
    let target_key = key_of(target);
    let mut keys: Vec<String> = vec![key_of(source)];
    let mut index: HashMap<String, usize> = HashMap::from([(keys[0].clone(), 0)]);
    let mut nodes = vec![Node {
        dist: 0.0,
        rep: source.clone(),
        pred: None,
        done: false,
    }];
    let mut heap = BinaryHeap::from([Reverse((Cost(0.0), keys[0].clone(), 0usize))]);
    let mut settled = 0;
    let mut explored = 0;
    let mut truncated = false;
    while let Some(Reverse((Cost(d), key, u))) = heap.pop() {
        if nodes[u].done || d > nodes[u].dist + COST_TOL {
            continue;
        }
        if !quotient && d > cfg.max_radius + COST_TOL {
            return Err(Error::RadiusExceeded {
                radius: cfg.max_radius,
            });
        }
        nodes[u].done = true;
        settled += 1;
        if key == target_key {
            let witness = rebuild(&nodes, u, cfg.disjoint)?;
            return Ok(DistanceResult {
                distance: nodes[u].dist,
                witness_batches: witness.batch_sizes(),
                witness,
                settled_nodes: settled,
                explored_edges: explored,
                truncated,
            });
        }
        if settled > cfg.node_cap {
            return Err(Error::CapExceeded { cap: cfg.node_cap });
        }
        let (out, cut) = steps(&nodes[u].rep, cfg);
        truncated |= cut;
        explored += out.len();
        for step in out {
            let nd = d + step.weight;
            let k = key_of(&step.result);
            match index.get(&k) {
                None => {
                    let v = nodes.len();
                    index.insert(k.clone(), v);
                    keys.push(k.clone());
                    nodes.push(Node {
                        dist: nd,
                        rep: step.result,
                        pred: Some((u, step.batch)),
                        done: false,
                    });
                    heap.push(Reverse((Cost(nd), k, v)));
                }
                Some(&v) => {
                    if nodes[v].done {
                        continue;
                    }
                    let old = nodes[v].dist;
                    let better = nd < old - COST_TOL;
                    let tie_wins = (nd - old).abs() <= COST_TOL
                        && nodes[v].pred.as_ref().is_some_and(|(p, _)| keys[u] < keys[*p]);
                    if better || tie_wins {
                        nodes[v].dist = nd.min(old);
                        nodes[v].rep = step.result;
                        nodes[v].pred = Some((u, step.batch));
                        if better {
                            heap.push(Reverse((Cost(nd), k, v)));
                        }
                    }
                }
            }
        }
    }
    Err(Error::Domain("target unreachable from source".into()))
}

fn rebuild(nodes: &[Node], mut at: usize, disjoint: Disjointness) -> Result<MoveSchedule> {
    let mut batches = Vec::new();
    while let Some((p, batch)) = &nodes[at].pred {
        batches.push(batch.clone());
        at = *p;
    }
    batches.reverse();
    MoveSchedule::replay(nodes[at].rep.clone(), batches, disjoint)
}

/// The quotient graph on all classes of a stratum.
#[derive(Clone, Debug)]
pub struct ClassGraph {
    pub genus: usize,
    pub punctures: usize,
    pub keys: Vec<CanonicalKey>,
    pub reps: Vec<PantsGraph>,
    /// Minimum-weight edge to each neighbouring class.
    pub adj: Vec<Vec<(usize, f64)>>,
    pub explored_edges: usize,
    pub truncated: bool,
}

pub fn class_graph(g: usize, n: usize, class_cap: usize, cfg: &OracleConfig) -> Result<ClassGraph> {
    let classes = enumerate_keyed(g, n, class_cap, cfg.exec)?;
    let (keys, reps): (Vec<_>, Vec<_>) = classes.into_iter().unzip();
    let lookup: HashMap<&CanonicalKey, usize> = keys.iter().enumerate().map(|(i, k)| (k, i)).collect();
    let rows = cfg.exec.map(&reps, |rep| {
        let (out, cut) = steps(rep, &OracleConfig { exec: Exec::Sequential, ..*cfg });
        let count = out.len();
        let edges: Vec<(CanonicalKey, f64)> = out
            .into_iter()
            .map(|s| (canonicalize(&s.result), s.weight))
            .collect();
        (edges, count, cut)
    });
    let mut adj = Vec::with_capacity(keys.len());
    let mut explored = 0;
    let mut truncated = false;
    for (i, (edges, count, cut)) in rows.into_iter().enumerate() {
        explored += count;
        truncated |= cut;
        let mut best: HashMap<usize, f64> = HashMap::new();
        for (k, w) in edges {
            let j = *lookup.get(&k).ok_or_else(|| {
                Error::Invariant(format!("neighbour of class {i} missing from enumeration"))
            })?;
            if j != i {
                let e = best.entry(j).or_insert(w);
                *e = e.min(w);
            }
        }
        let mut row: Vec<(usize, f64)> = best.into_iter().collect();
        row.sort_by_key(|&(j, _)| j);
        adj.push(row);
    }
    Ok(ClassGraph {
        genus: g,
        punctures: n,
        keys,
        reps,
        adj,
        explored_edges: explored,
        truncated,
    })
}

impl ClassGraph {
    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn index_of(&self, graph: &PantsGraph) -> Option<usize> {
        let k = canonicalize(graph);
        self.keys.binary_search(&k).ok()
    }

    /// Single-source shortest distances (infinite when unreachable).
    pub fn distances_from(&self, s: usize) -> Vec<f64> {
        let mut dist = vec![f64::INFINITY; self.len()];
        dist[s] = 0.0;
        let mut heap = BinaryHeap::from([Reverse((Cost(0.0), s))]);
        while let Some(Reverse((Cost(d), u))) = heap.pop() {
            if d > dist[u] {
                continue;
            }
            for &(v, w) in &self.adj[u] {
                let nd = d + w;
                if nd < dist[v] {
                    dist[v] = nd;
                    heap.push(Reverse((Cost(nd), v)));
                }
            }
        }
        dist
    }

    pub fn all_pairs(&self, exec: Exec) -> Vec<Vec<f64>> {
        exec.map_range(self.len(), |s| self.distances_from(s))
    }

    pub fn is_connected(&self) -> bool {
        self.is_empty() || self.distances_from(0).iter().all(|d| d.is_finite())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DiameterReport {
    pub genus: usize,
    pub punctures: usize,
    pub metric: Metric,
    pub disjoint: Disjointness,
    pub diameter: f64,
    pub eccentric_pair: (String, String),
    pub class_count: usize,
    pub explored_edges: usize,
    pub connected: bool,
    pub truncated: bool,
}

/// Exact quotient diameter by all-pairs shortest paths over the classes.
pub fn diameter(
    g: usize,
    n: usize,
    quotient: bool,
    class_cap: usize,
    cfg: &OracleConfig,
) -> Result<DiameterReport> {
    if !quotient {
        return Err(Error::Domain(
            "the labeled pants graph is infinite; diameter needs --quotient".into(),
        ));
    }
    let cg = class_graph(g, n, class_cap, cfg)?;
    Ok(diameter_of(&cg, cfg))
}

pub fn diameter_of(cg: &ClassGraph, cfg: &OracleConfig) -> DiameterReport {
    let ecc = cfg.exec.map_range(cg.len(), |s| {
        let d = cg.distances_from(s);
        let mut best = (0.0f64, s);
        for (t, &x) in d.iter().enumerate() {
            if x > best.0 + COST_TOL {
                best = (x, t);
            }
        }
        best
    });
    let mut best = (0.0f64, 0usize, 0usize);
    for (s, &(d, t)) in ecc.iter().enumerate() {
        if d > best.0 + COST_TOL {
            best = (d, s, t);
        }
    }
    let (a, b) = (best.1.min(best.2), best.1.max(best.2));
    DiameterReport {
        genus: cg.genus,
        punctures: cg.punctures,
        metric: cfg.metric,
        disjoint: cfg.disjoint,
        diameter: best.0,
        eccentric_pair: (cg.keys[a].to_string(), cg.keys[b].to_string()),
        class_count: cg.len(),
        explored_edges: cg.explored_edges,
        connected: best.0.is_finite(),
        truncated: cg.truncated,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SandwichReport {
    pub schedule_cost: f64,
    pub unit_moves: usize,
    pub exact_distance: f64,
    /// exact distance <= schedule cost
    pub upper_ok: bool,
    /// schedule cost >= sqrt(unit moves)
    pub concavity_ok: bool,
    pub ratio: f64,
}

impl SandwichReport {
    pub fn holds(&self) -> bool {
        self.upper_ok && self.concavity_ok
    }
}

/// Compares a schedule against the exact quotient distance between its ends.
pub fn sandwich_check(schedule: &MoveSchedule, cfg: &OracleConfig) -> Result<SandwichReport> {
    schedule.verify()?;
    let cost = schedule.cost();
    let exact = distance(&schedule.start, &schedule.end, true, cfg)?.distance;
    Ok(sandwich_from(cost.cubical, cost.unit_moves, exact))
}

pub fn sandwich_from(cost: f64, unit_moves: usize, exact: f64) -> SandwichReport {
    SandwichReport {
        schedule_cost: cost,
        unit_moves,
        exact_distance: exact,
        upper_ok: exact <= cost + COST_TOL,
        concavity_ok: cost + COST_TOL >= (unit_moves as f64).sqrt(),
        ratio: if exact > 0.0 { cost / exact } else { 1.0 },
    }
}

/// The proxy `(n - log2 n + 3)^(1/2)` from the tree-diameter argument.
pub fn diameter_proxy_lower_bound(g: usize, n: usize) -> Result<f64> {
    if g != 0 {
        return Err(Error::Domain("the diameter proxy is for genus 0".into()));
    }
    if n < 4 {
        return Err(Error::Domain(format!("n = {n} < 4")));
    }
    let n = n as f64;
    Ok((n - n.log2() + 3.0).sqrt())
}

/// `sqrt(|diam(a) - diam(b)|)`, a certified lower bound for the cubical
/// distance between trees: a batch of `k` moves changes the tree diameter
/// by at most `k` and costs `sqrt(k)`, and `sum sqrt(k_i) >= sqrt(sum k_i)`.
pub fn certified_tree_bound(a: &PantsGraph, b: &PantsGraph) -> Result<f64> {
    let (Some(da), Some(db)) = (a.tree_diameter(), b.tree_diameter()) else {
        return Err(Error::NotTree);
    };
    Ok((da.abs_diff(db) as f64).sqrt())
}

/// Trees of maximal and minimal diameter in `(0, n)` (first by key on ties).
pub fn extreme_diameter_trees(n: usize, class_cap: usize, exec: Exec) -> Result<(PantsGraph, PantsGraph)> {
    let classes: Vec<PantsGraph> = enumerate_keyed(0, n, class_cap, exec)?.into_values().collect();
    let diam = |g: &PantsGraph| g.tree_diameter().expect("genus 0");
    let mut max = &classes[0];
    let mut min = &classes[0];
    for g in &classes {
        if diam(g) > diam(max) {
            max = g;
        }
        if diam(g) < diam(min) {
            min = g;
        }
    }
    Ok((max.clone(), min.clone()))
}

#[derive(Clone, Debug, Serialize)]
pub struct LipschitzReport {
    pub trees: usize,
    pub moves: usize,
    pub max_change: usize,
}

/// Largest change in tree diameter under one move, over every move on every
/// tree class with `4 <= n <= max_n`.
pub fn tree_diameter_lipschitz(max_n: usize, class_cap: usize, exec: Exec) -> Result<LipschitzReport> {
    let mut report = LipschitzReport {
        trees: 0,
        moves: 0,
        max_change: 0,
    };
    for n in 4..=max_n {
        let classes: Vec<PantsGraph> = enumerate_keyed(0, n, class_cap, exec)?.into_values().collect();
        let rows = exec.map(&classes, |t| {
            let d = t.tree_diameter().expect("genus 0");
            let moves = crate::moves::all_moves(t);
            let worst = moves
                .iter()
                .map(|mv| mv.apply(t).unwrap().tree_diameter().unwrap().abs_diff(d))
                .max()
                .unwrap_or(0);
            (moves.len(), worst)
        });
        report.trees += classes.len();
        for (m, w) in rows {
            report.moves += m;
            report.max_change = report.max_change.max(w);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::examples::*;

    #[test]
    fn identical_endpoints() {
        let r = distance(&claw6(), &claw6(), true, &OracleConfig::default()).unwrap();
        assert_eq!(r.distance, 0.0);
        assert!(r.witness.batches.is_empty());
    }

    #[test]
    fn linear_to_claw_is_one() {
        let r = distance(&linear_tree(6), &claw6(), true, &OracleConfig::default()).unwrap();
        assert_eq!(r.distance, 1.0);
        assert!(crate::canonical::is_isomorphic(&r.witness.end, &claw6()));
    }

    #[test]
    fn small_diameters() {
        let cfg = OracleConfig::default();
        assert_eq!(diameter(0, 4, true, 100, &cfg).unwrap().diameter, 0.0);
        assert_eq!(diameter(0, 6, true, 100, &cfg).unwrap().diameter, 1.0);
        assert!(diameter(0, 6, false, 100, &cfg).is_err());
    }

    #[test]
    fn mismatched_strata_rejected() {
        let err = distance(&theta(), &claw6(), true, &OracleConfig::default()).unwrap_err();
        assert!(matches!(err, Error::Mismatch(_)));
    }

    #[test]
    fn labeled_distance_within_radius() {
        let g = linear_tree(6);
        let mv = move_variants(&g, 1).unwrap()[1];
        let h = mv.apply(&g).unwrap();
        let r = distance(&g, &h, false, &OracleConfig::default()).unwrap();
        assert_eq!(r.distance, 1.0);
        assert_eq!(r.witness.end.owners(), h.owners());
    }

    #[test]
    fn proxy_values() {
        assert!((diameter_proxy_lower_bound(0, 8).unwrap() - 8f64.sqrt()).abs() < 1e-12);
        assert!(diameter_proxy_lower_bound(0, 3).is_err());
        assert!(diameter_proxy_lower_bound(1, 8).is_err());
    }

    #[test]
    fn sandwich_arithmetic() {
        let r = sandwich_from(3.0, 5, 1.0);
        assert!(r.holds());
        assert!((r.schedule_cost - (2.0 + 1.0)).abs() < 1e-15);
    }
}
